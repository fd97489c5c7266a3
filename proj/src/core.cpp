#include "hdvgrid/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace hdvgrid {

namespace {

std::string located(const std::string& file, int line, const std::string& field,
                    const std::string& what) {
  std::string msg;
  if (!file.empty()) {
    msg += file;
    if (line > 0) msg += ":" + std::to_string(line);
    msg += ": ";
  }
  if (!field.empty()) msg += "field '" + field + "': ";
  return msg + what;
}

void require(bool ok, const std::string& what, const std::string& invariant) {
  if (!ok) throw ValidationError(what + ": " + invariant);
}

bool in_unit_interval_open_left(double v) { return v > 0.0 && v <= 1.0; }

}  // namespace

ConfigError::ConfigError(std::string file, int line, std::string field, const std::string& what)
    : std::runtime_error(located(file, line, field, what)),
      file_(std::move(file)),
      line_(line),
      field_(std::move(field)) {}

double TimeSeries::sum() const noexcept {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

TimeSeries TimeSeries::head(std::size_t n) const {
  TimeSeries out;
  out.resolution_h = resolution_h;
  out.values.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(std::min(n, values.size())));
  return out;
}

std::string_view to_string(GenKind k) {
  return k == GenKind::VariableRenewable ? "variable-renewable" : "dispatchable";
}

GenKind gen_kind_from_string(std::string_view s) {
  if (s == "variable-renewable") return GenKind::VariableRenewable;
  if (s == "dispatchable") return GenKind::Dispatchable;
  throw ValidationError("unknown generator kind '" + std::string(s) + "'");
}

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::REF: return "REF";
    case ScenarioKind::BEV_FLEX: return "BEV_FLEX";
    case ScenarioKind::BEV_FLEX_V2G: return "BEV_FLEX_V2G";
    case ScenarioKind::BEV_INFLEX: return "BEV_INFLEX";
    case ScenarioKind::ERS_FLEX: return "ERS_FLEX";
    case ScenarioKind::ERS_FLEX_V2G: return "ERS_FLEX_V2G";
    case ScenarioKind::ERS_INFLEX: return "ERS_INFLEX";
    case ScenarioKind::FCEV_CENTRAL: return "FCEV_CENTRAL";
    case ScenarioKind::FCEV_ONSITE: return "FCEV_ONSITE";
    case ScenarioKind::ICEV_PTL: return "ICEV_PTL";
  }
  return "?";
}

ScenarioKind scenario_kind_from_string(std::string_view s) {
  for (ScenarioKind k : kAllScenarios)
    if (to_string(k) == s) return k;
  throw ValidationError("unknown scenario kind '" + std::string(s) + "'");
}

bool uses_battery_fleet(ScenarioKind k) noexcept {
  switch (k) {
    case ScenarioKind::BEV_FLEX:
    case ScenarioKind::BEV_FLEX_V2G:
    case ScenarioKind::BEV_INFLEX:
    case ScenarioKind::ERS_FLEX:
    case ScenarioKind::ERS_FLEX_V2G:
    case ScenarioKind::ERS_INFLEX: return true;
    default: return false;
  }
}

bool uses_catenary(ScenarioKind k) noexcept {
  return k == ScenarioKind::ERS_FLEX || k == ScenarioKind::ERS_FLEX_V2G ||
         k == ScenarioKind::ERS_INFLEX;
}

bool uses_fuel_chain(ScenarioKind k) noexcept {
  return k == ScenarioKind::FCEV_CENTRAL || k == ScenarioKind::FCEV_ONSITE ||
         k == ScenarioKind::ICEV_PTL;
}

bool is_inflexible(ScenarioKind k) noexcept {
  return k == ScenarioKind::BEV_INFLEX || k == ScenarioKind::ERS_INFLEX;
}

bool allows_v2g(ScenarioKind k) noexcept {
  return k == ScenarioKind::BEV_FLEX_V2G || k == ScenarioKind::ERS_FLEX_V2G;
}

const GenerationTech* TechnologyCatalog::find_generator(std::string_view name) const {
  for (const auto& g : generators)
    if (g.name == name) return &g;
  return nullptr;
}

const StorageTech* TechnologyCatalog::find_storage(std::string_view name) const {
  for (const auto& s : storages)
    if (s.name == name) return &s;
  return nullptr;
}

const Node* TechnologyCatalog::find_node(std::string_view name) const {
  for (const auto& n : nodes)
    if (n.name == name) return &n;
  return nullptr;
}

std::size_t TechnologyCatalog::expandable_node() const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].expandable) return i;
  throw ValidationError("catalog: exactly one node must be expandable");
}

std::size_t TechnologyCatalog::max_horizon() const {
  std::size_t h = std::numeric_limits<std::size_t>::max();
  for (const auto& [_, s] : series) h = std::min(h, s.length());
  return series.empty() ? 0 : h;
}

FleetSpec FleetSpec::default_bev() {
  FleetSpec f;
  f.name = "BEV";
  f.range_km = 500.0;
  f.battery_capacity_kwh = 655.0;
  f.depot_rating_kw = 200.0;
  f.depot_rating_effective_kw = 166.0;
  f.stop_rating_kw = 200.0;
  f.stop_rating_effective_kw = 166.0;
  f.break_rating_kw = 500.0;
  f.break_rating_effective_kw = 415.0;
  f.catenary_rating_kw = 0.0;
  f.charging_efficiency = 0.83;
  f.discharge_efficiency = 0.83;
  f.consumption_catenary_kwh_per_km = 1.31;
  f.consumption_battery_kwh_per_km = 1.31;
  return f;
}

FleetSpec FleetSpec::default_ers() {
  FleetSpec f;
  f.name = "ERS-BEV";
  f.range_km = 150.0;
  f.battery_capacity_kwh = 181.0;
  f.depot_rating_kw = 200.0;
  f.depot_rating_effective_kw = 166.0;
  f.catenary_rating_kw = 400.0;
  f.charging_efficiency = 0.83;
  f.discharge_efficiency = 0.83;
  f.consumption_catenary_kwh_per_km = 1.42;
  f.consumption_battery_kwh_per_km = 1.25;
  return f;
}

FuelChainSpec FuelChainSpec::defaults() {
  FuelChainSpec c;
  c.electrolyzers = {{"PEM", 45000.0, 0.64}, {"ALK", 52000.0, 0.66}};
  c.h2_storage_cost = 300.0;
  c.transport_kwh_per_kg = 1.0;
  c.synthesis_efficiency = 0.73;
  c.synthesis_investment_cost = 60000.0;
  c.liquid_storage_cost = 1.0;
  return c;
}

void validate(const GenerationTech& g) {
  const std::string what = "generator '" + g.name + "'";
  require(!g.name.empty(), "generator", "name must not be empty");
  require(in_unit_interval_open_left(g.efficiency), what, "efficiency in (0,1]");
  require(g.capacity_min <= g.capacity_max, what, "lower bound <= upper bound");
  require(g.capacity_min >= 0.0, what, "capacity lower bound >= 0");
  require(g.emission_factor >= 0.0, what, "emission factor >= 0");
  require(std::isfinite(g.investment_cost) && std::isfinite(g.fixed_om) &&
              std::isfinite(g.variable_cost) && std::isfinite(g.fuel_cost),
          what, "costs must be finite");
  if (g.kind == GenKind::VariableRenewable)
    require(!g.availability.empty(), what, "variable renewable needs an availability series");
}

void validate(const StorageTech& s) {
  const std::string what = "storage '" + s.name + "'";
  require(!s.name.empty(), "storage", "name must not be empty");
  require(in_unit_interval_open_left(s.charge_efficiency) &&
              in_unit_interval_open_left(s.discharge_efficiency),
          what, "efficiencies in (0,1]");
  require(s.self_discharge >= 0.0 && s.self_discharge < 1.0, what, "self-discharge in [0,1)");
  require(s.energy_min <= s.energy_max && s.power_min <= s.power_max, what,
          "lower bound <= upper bound");
  if (s.fixed)
    require(std::isfinite(s.energy_max) && std::isfinite(s.power_max), what,
            "fixed storage needs finite installed sizes");
}

void validate(const Interconnector& ic) {
  const std::string what = "interconnector " + ic.from + "->" + ic.to;
  require(ic.ntc_forward >= 0.0 && ic.ntc_backward >= 0.0, what, "NTC >= 0");
  require(ic.loss >= 0.0 && ic.loss < 1.0, what, "loss factor in [0,1)");
}

void validate(const FleetSpec& f) {
  const std::string what = "fleet '" + f.name + "'";
  require(f.battery_capacity_kwh > 0.0, what, "battery capacity > 0");
  require(f.consumption_battery_kwh_per_km > 0.0, what, "consumptions > 0");
  if (f.has_catenary())
    require(f.consumption_catenary_kwh_per_km > 0.0, what, "consumptions > 0");
  require(in_unit_interval_open_left(f.charging_efficiency) &&
              in_unit_interval_open_left(f.discharge_efficiency),
          what, "efficiencies in (0,1]");
  auto check_rating = [&](double nominal, double effective, const char* label) {
    require(nominal >= 0.0 && effective >= 0.0, what, std::string(label) + " rating >= 0");
    if (nominal > 0.0)
      require(std::abs(effective - nominal * f.charging_efficiency) <= 0.01 * nominal, what,
              std::string("effective ") + label +
                  " rating = nominal rating x charging efficiency within 1%");
  };
  check_rating(f.depot_rating_kw, f.depot_rating_effective_kw, "depot");
  check_rating(f.stop_rating_kw, f.stop_rating_effective_kw, "stop");
  check_rating(f.break_rating_kw, f.break_rating_effective_kw, "break");
  require(f.catenary_rating_kw >= 0.0, what, "catenary rating >= 0");
  for (const auto& [id, n] : f.profile_vehicles)
    require(n >= 0.0, what, "vehicle count of profile " + id + " >= 0");
}

void validate(const FuelChainSpec& c) {
  require(!c.electrolyzers.empty(), "fuel chain", "at least one electrolyzer technology");
  for (const auto& e : c.electrolyzers)
    require(in_unit_interval_open_left(e.efficiency), "electrolyzer '" + e.name + "'",
            "efficiency in (0,1]");
  require(in_unit_interval_open_left(c.synthesis_efficiency), "fuel chain",
          "synthesis efficiency in (0,1]");
  require(c.h2_kg_per_100km > 0.0 && c.diesel_l_per_100km > 0.0, "fuel chain",
          "specific demands > 0");
  require(c.h2_energy_kwh_per_kg > 0.0 && c.diesel_energy_kwh_per_l > 0.0, "fuel chain",
          "energy contents > 0");
  require(c.onsite_buffer_hours >= 0.0 && c.transport_kwh_per_kg >= 0.0, "fuel chain",
          "buffer and transport electricity >= 0");
}

void validate(const ScenarioConfig& cfg) {
  require(cfg.horizon > 0, "scenario", "horizon > 0");
  require(cfg.depot_scale > 0.0 && cfg.away_scale > 0.0, "scenario",
          "availability scalars > 0");
  require(cfg.voll > 0.0, "scenario", "value of lost load > 0");
  require(cfg.co2_price >= 0.0, "scenario", "CO2 price >= 0");
  require(cfg.anchor_weekday >= 0 && cfg.anchor_weekday < 7, "scenario",
          "anchor weekday in [0,6]");
  if (cfg.wind_cap_onshore) require(*cfg.wind_cap_onshore >= 0.0, "scenario", "wind cap >= 0");
  if (cfg.wind_cap_offshore) require(*cfg.wind_cap_offshore >= 0.0, "scenario", "wind cap >= 0");
  require(cfg.solver.feasibility_tol > 0.0 && cfg.solver.optimality_tol > 0.0, "solver options",
          "tolerances > 0");
}

void validate(const TechnologyCatalog& cat) {
  std::set<std::string> names;
  for (const auto& g : cat.generators) {
    validate(g);
    require(names.insert(g.name).second, "catalog", "duplicate technology name '" + g.name + "'");
    if (!g.availability.empty())
      require(cat.series.count(g.availability) == 1, "generator '" + g.name + "'",
              "availability series '" + g.availability + "' is not defined");
  }
  for (const auto& s : cat.storages) {
    validate(s);
    require(names.insert(s.name).second, "catalog", "duplicate technology name '" + s.name + "'");
  }
  int expandable = 0;
  std::set<std::string> node_names;
  for (const auto& n : cat.nodes) {
    require(node_names.insert(n.name).second, "catalog", "duplicate node '" + n.name + "'");
    require(cat.series.count(n.load) == 1, "node '" + n.name + "'",
            "load series '" + n.load + "' is not defined");
    if (n.expandable) ++expandable;
    for (const auto& [tech, mw] : n.fixed_capacity) {
      require(mw >= 0.0, "node '" + n.name + "'", "fixed capacities >= 0");
      std::string base = tech;
      if (auto dot = tech.rfind(".energy"); dot != std::string::npos && dot + 7 == tech.size())
        base = tech.substr(0, dot);
      require(cat.find_generator(base) || cat.find_storage(base), "node '" + n.name + "'",
              "fixed capacity for unknown technology '" + tech + "'");
    }
  }
  require(expandable == 1, "catalog", "exactly one node is expandable");
  for (const auto& ic : cat.interconnectors) {
    validate(ic);
    require(node_names.count(ic.from) && node_names.count(ic.to) && ic.from != ic.to,
            "interconnector " + ic.from + "->" + ic.to, "endpoints must be distinct known nodes");
  }
  for (const auto& [name, s] : cat.series) {
    const bool availability =
        std::any_of(cat.generators.begin(), cat.generators.end(),
                    [&](const GenerationTech& g) { return g.availability == name; });
    for (double v : s.values) {
      require(std::isfinite(v), "series '" + name + "'", "values must be finite");
      if (availability) require(v >= 0.0 && v <= 1.0, "series '" + name + "'",
                                "availability values in [0,1]");
      else require(v >= 0.0, "series '" + name + "'", "demand values >= 0");
    }
  }
}

TechnologyCatalog make_island(TechnologyCatalog cat) {
  for (auto& ic : cat.interconnectors) {
    ic.ntc_forward = 0.0;
    ic.ntc_backward = 0.0;
  }
  return cat;
}

CheckedScenario validate_scenario(const ScenarioConfig& cfg, const TechnologyCatalog& catalog,
                                  const std::optional<FleetSpec>& fleet,
                                  const std::optional<FuelChainSpec>& chain) {
  validate(cfg);
  validate(catalog);
  const ScenarioKind k = cfg.kind;
  if (k == ScenarioKind::REF) {
    if (fleet) throw ValidationError("scenario REF: reference scenarios carry no fleet");
  } else if (uses_battery_fleet(k)) {
    if (!fleet) throw ValidationError("scenario " + std::string(to_string(k)) + ": fleet required");
    validate(*fleet);
    if (uses_catenary(k) && !fleet->has_catenary())
      throw ValidationError("scenario " + std::string(to_string(k)) +
                            ": fleet needs a catenary rating");
    if (!uses_catenary(k) && fleet->has_catenary())
      throw ValidationError("scenario " + std::string(to_string(k)) +
                            ": battery-only scenario given a catenary fleet");
  }
  if (uses_fuel_chain(k)) {
    if (!chain)
      throw ValidationError("scenario " + std::string(to_string(k)) + ": fuel chain required");
    validate(*chain);
  }
  if (catalog.max_horizon() < cfg.horizon)
    throw ValidationError("catalog series shorter than horizon " + std::to_string(cfg.horizon));

  CheckedScenario out;
  out.config = cfg;
  out.catalog = catalog;
  for (auto& [_, s] : out.catalog.series) s = s.head(cfg.horizon);
  if (cfg.island) out.catalog = make_island(std::move(out.catalog));
  if (uses_battery_fleet(k)) out.fleet = fleet;
  if (uses_fuel_chain(k)) out.chain = chain;
  return out;
}

double scale_availability(double rating_kw, ConnectionKind kind, double depot_scale,
                          double away_scale) {
  const double s = kind == ConnectionKind::Depot ? depot_scale : away_scale;
  return std::max(0.0, rating_kw) * s;
}

std::vector<double> scale_availability(const std::vector<double>& series_kw, ConnectionKind kind,
                                       double depot_scale, double away_scale) {
  std::vector<double> out(series_kw.size());
  std::transform(series_kw.begin(), series_kw.end(), out.begin(), [&](double v) {
    return scale_availability(v, kind, depot_scale, away_scale);
  });
  return out;
}

FleetSpec scale_availability(FleetSpec fleet, double depot_scale, double away_scale) {
  fleet.depot_rating_kw *= depot_scale;
  fleet.depot_rating_effective_kw *= depot_scale;
  fleet.stop_rating_kw *= away_scale;
  fleet.stop_rating_effective_kw *= away_scale;
  fleet.break_rating_kw *= away_scale;
  fleet.break_rating_effective_kw *= away_scale;
  return fleet;
}

}  // namespace hdvgrid
