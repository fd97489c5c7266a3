#include "hdvgrid/config_io.hpp"
#include "hdvgrid/profiles.hpp"
#include "hdvgrid/runner.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hdvgrid {

namespace fs = std::filesystem;

namespace {

/// Field accessors that attach file, line and key to every failure.
class Doc {
 public:
  Doc(fs::path file, YAML::Node node) : file_(std::move(file)), node_(std::move(node)) {}

  static Doc open(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError(file.string(), 0, "", "cannot open file");
    try {
      return Doc(file, YAML::Load(in));
    } catch (const YAML::Exception& e) {
      throw ConfigError(file.string(), e.mark.line + 1, "", e.msg);
    }
  }

  Doc child(const std::string& key) const { return Doc(file_, node_[key]); }
  bool has(const std::string& key) const { return node_.IsMap() && node_[key].IsDefined(); }
  const YAML::Node& node() const { return node_; }
  const fs::path& file() const { return file_; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const YAML::Node n = has(key) ? node_[key] : node_;
    throw ConfigError(file_.string(), n.Mark().line + 1, key, what);
  }

  double number(const std::string& key) const {
    if (!has(key)) fail(key, "missing required field");
    return as_number(node_[key], key);
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? as_number(node_[key], key) : fallback;
  }
  std::string text(const std::string& key) const {
    if (!has(key)) fail(key, "missing required field");
    return as_text(node_[key], key);
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? as_text(node_[key], key) : fallback;
  }
  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    try {
      return node_[key].as<bool>();
    } catch (const YAML::Exception&) {
      fail(key, "expected true or false");
    }
  }
  fs::path path(const std::string& key) const {
    fs::path p = text(key);
    return p.is_absolute() ? p : file_.parent_path() / p;
  }

  double as_number(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(key, "expected a number");
    const std::string s = n.Scalar();
    if (s == "inf" || s == ".inf" || s == "+inf") return kInf;
    if (s == "-inf" || s == "-.inf") return -kInf;
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      throw ConfigError(file_.string(), n.Mark().line + 1, key, "expected a number, got '" + s + "'");
    }
  }
  std::string as_text(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(key, "expected a string");
    return n.Scalar();
  }

 private:
  fs::path file_;
  YAML::Node node_;
};

template <typename F>
auto with_location(const Doc& d, const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    const YAML::Node n = d.has(key) ? d.node()[key] : d.node();
    throw ValidationError(d.file().string() + ":" + std::to_string(n.Mark().line + 1) + ": " +
                          e.what());
  }
}

GenerationTech parse_generator(const Doc& d) {
  GenerationTech g;
  g.name = d.text("name");
  g.kind = with_location(d, "kind", [&] { return gen_kind_from_string(d.text("kind")); });
  g.category = d.text("category", "");
  g.renewable = d.flag("renewable", g.kind == GenKind::VariableRenewable);
  g.investment_cost = d.number("investment_cost", 0.0);
  g.fixed_om = d.number("fixed_om", 0.0);
  g.variable_cost = d.number("variable_cost", 0.0);
  g.fuel_cost = d.number("fuel_cost", 0.0);
  g.efficiency = d.number("efficiency", 1.0);
  g.emission_factor = d.number("emission_factor", 0.0);
  g.capacity_min = d.number("capacity_min", 0.0);
  g.capacity_max = d.number("capacity_max", kInf);
  g.availability = d.text("availability", "");
  with_location(d, "name", [&] { validate(g); });
  return g;
}

StorageTech parse_storage(const Doc& d) {
  StorageTech s;
  s.name = d.text("name");
  s.energy_cost = d.number("energy_cost", 0.0);
  s.charge_power_cost = d.number("charge_power_cost", 0.0);
  s.discharge_power_cost = d.number("discharge_power_cost", 0.0);
  s.charge_efficiency = d.number("charge_efficiency", 1.0);
  s.discharge_efficiency = d.number("discharge_efficiency", 1.0);
  s.self_discharge = d.number("self_discharge", 0.0);
  s.energy_min = d.number("energy_min", 0.0);
  s.energy_max = d.number("energy_max", kInf);
  s.power_min = d.number("power_min", 0.0);
  s.power_max = d.number("power_max", kInf);
  s.fixed = d.flag("fixed", false);
  with_location(d, "name", [&] { validate(s); });
  return s;
}

Node parse_node(const Doc& d) {
  Node n;
  n.name = d.text("name");
  n.load = d.text("load");
  n.expandable = d.flag("expandable", false);
  if (d.has("fixed_capacity")) {
    const Doc caps = d.child("fixed_capacity");
    if (!caps.node().IsMap()) d.fail("fixed_capacity", "expected a mapping tech -> MW");
    for (const auto& kv : caps.node()) {
      const std::string tech = kv.first.Scalar();
      n.fixed_capacity[tech] = caps.as_number(kv.second, "fixed_capacity." + tech);
    }
  }
  return n;
}

Interconnector parse_interconnector(const Doc& d) {
  Interconnector ic;
  ic.from = d.text("from");
  ic.to = d.text("to");
  ic.ntc_forward = d.number("ntc_forward");
  ic.ntc_backward = d.number("ntc_backward", ic.ntc_forward);
  ic.loss = d.number("loss", 0.0);
  with_location(d, "from", [&] { validate(ic); });
  return ic;
}

template <typename T, typename F>
std::vector<T> parse_list(const Doc& d, const std::string& key, F&& parse) {
  std::vector<T> out;
  if (!d.has(key)) return out;
  const Doc list = d.child(key);
  if (!list.node().IsSequence()) d.fail(key, "expected a list");
  for (const auto& item : list.node()) out.push_back(parse(Doc(d.file(), item)));
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

TimeSeries load_series(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "", "cannot open series file");
  TimeSeries ts;
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw ConfigError(path.string(), 1, "", "missing header line");
  ++lineno;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v = 0.0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
      throw ConfigError(path.string(), lineno, "", "expected one number per line, got '" + line + "'");
    ts.values.push_back(v);
  }
  return ts;
}

void write_series(const fs::path& path, const std::string& header,
                  const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string(), 0, "", "cannot write series file");
  out << header << '\n';
  for (double v : values) out << format_number(v) << '\n';
}

TechnologyCatalog load_catalog(const fs::path& path) {
  const Doc d = Doc::open(path);
  TechnologyCatalog cat;
  if (d.has("series")) {
    const Doc series = d.child("series");
    if (!series.node().IsMap()) d.fail("series", "expected a mapping name -> file");
    for (const auto& kv : series.node()) {
      const std::string name = kv.first.Scalar();
      fs::path p = kv.second.Scalar();
      if (!p.is_absolute()) p = path.parent_path() / p;
      cat.series[name] = load_series(p);
    }
  }
  cat.generators = parse_list<GenerationTech>(d, "generators", parse_generator);
  cat.storages = parse_list<StorageTech>(d, "storages", parse_storage);
  cat.nodes = parse_list<Node>(d, "nodes", parse_node);
  cat.interconnectors = parse_list<Interconnector>(d, "interconnectors", parse_interconnector);
  try {
    validate(cat);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return cat;
}

FleetSpec load_fleet(const fs::path& path) {
  const Doc d = Doc::open(path);
  FleetSpec f;
  f.name = d.text("name", "fleet");
  f.fleet_size = d.number("fleet_size", 0.0);
  f.range_km = d.number("range_km", 0.0);
  f.battery_capacity_kwh = d.number("battery_capacity_kwh");
  f.depot_rating_kw = d.number("depot_rating_kw", 0.0);
  f.depot_rating_effective_kw = d.number("depot_rating_effective_kw", 0.0);
  f.stop_rating_kw = d.number("stop_rating_kw", 0.0);
  f.stop_rating_effective_kw = d.number("stop_rating_effective_kw", 0.0);
  f.break_rating_kw = d.number("break_rating_kw", 0.0);
  f.break_rating_effective_kw = d.number("break_rating_effective_kw", 0.0);
  f.catenary_rating_kw = d.number("catenary_rating_kw", 0.0);
  f.charging_efficiency = d.number("charging_efficiency");
  f.discharge_efficiency = d.number("discharge_efficiency", f.charging_efficiency);
  f.consumption_battery_kwh_per_km = d.number("consumption_battery_kwh_per_km");
  f.consumption_catenary_kwh_per_km =
      d.number("consumption_catenary_kwh_per_km", f.consumption_battery_kwh_per_km);
  f.v2g_allowed = d.flag("v2g_allowed", true);
  if (d.has("profile_vehicles")) {
    const Doc pv = d.child("profile_vehicles");
    for (const auto& kv : pv.node())
      f.profile_vehicles[kv.first.Scalar()] = pv.as_number(kv.second, "profile_vehicles");
  }
  try {
    validate(f);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return f;
}

FuelChainSpec load_fuel_chain(const fs::path& path) {
  const Doc d = Doc::open(path);
  FuelChainSpec c;
  c.electrolyzers = parse_list<ElectrolyzerTech>(d, "electrolyzers", [](const Doc& e) {
    return ElectrolyzerTech{e.text("name"), e.number("investment_cost"), e.number("efficiency")};
  });
  c.h2_storage_cost = d.number("h2_storage_cost", 0.0);
  c.h2_storage_max = d.number("h2_storage_max", kInf);
  c.transport_kwh_per_kg = d.number("transport_kwh_per_kg", 0.0);
  c.synthesis_efficiency = d.number("synthesis_efficiency", 1.0);
  c.synthesis_investment_cost = d.number("synthesis_investment_cost", 0.0);
  c.liquid_storage_cost = d.number("liquid_storage_cost", 0.0);
  c.h2_energy_kwh_per_kg = d.number("h2_energy_kwh_per_kg", 33.33);
  c.diesel_energy_kwh_per_l = d.number("diesel_energy_kwh_per_l", 9.97);
  c.h2_kg_per_100km = d.number("h2_kg_per_100km", 6.8);
  c.diesel_l_per_100km = d.number("diesel_l_per_100km", 27.1);
  c.onsite_buffer_hours = d.number("onsite_buffer_hours", 24.0);
  try {
    validate(c);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return c;
}

namespace {

SolverOptions parse_solver(const Doc& s) {
  SolverOptions o;
  o.feasibility_tol = s.number("feasibility_tol", o.feasibility_tol);
  o.optimality_tol = s.number("optimality_tol", o.optimality_tol);
  o.max_iterations = static_cast<long>(s.number("max_iterations", static_cast<double>(o.max_iterations)));
  o.bland_fallback = s.flag("bland_fallback", o.bland_fallback);
  o.scaling = s.flag("scaling", o.scaling);
  return o;
}

}  // namespace

ScenarioConfig load_scenario(const fs::path& path) {
  const Doc d = Doc::open(path);
  ScenarioConfig cfg;
  cfg.kind = with_location(d, "kind", [&] { return scenario_kind_from_string(d.text("kind", "REF")); });
  cfg.horizon = static_cast<std::size_t>(d.number("horizon", 168));
  cfg.island = d.flag("island", false);
  cfg.co2_price = d.number("co2_price", cfg.co2_price);
  if (d.has("wind_cap_onshore")) cfg.wind_cap_onshore = d.number("wind_cap_onshore");
  if (d.has("wind_cap_offshore")) cfg.wind_cap_offshore = d.number("wind_cap_offshore");
  cfg.depot_scale = d.number("depot_scale", 1.0);
  cfg.away_scale = d.number("away_scale", 1.0);
  cfg.voll = d.number("voll", cfg.voll);
  cfg.anchor_weekday = static_cast<int>(d.number("anchor_weekday", 0));
  if (d.has("solver")) cfg.solver = parse_solver(d.child("solver"));
  try {
    validate(cfg);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return cfg;
}

SynthConfig load_synth_config(const fs::path& path) {
  const Doc d = Doc::open(path);
  SynthConfig cfg;
  cfg.relations = d.path("relations");
  auto& p = cfg.params;
  p.working_days = d.number("working_days", p.working_days);
  p.speed_kmh = d.number("speed_kmh", p.speed_kmh);
  p.break_threshold_h = d.number("break_threshold_h", p.break_threshold_h);
  p.break_h = d.number("break_h", p.break_h);
  p.default_idle_per_stop_h = d.number("default_idle_per_stop_h", p.default_idle_per_stop_h);
  p.min_bin = static_cast<int>(d.number("min_bin", p.min_bin));
  p.max_bin = static_cast<int>(d.number("max_bin", p.max_bin));
  if (d.has("idle_per_stop_h")) {
    const Doc idle = d.child("idle_per_stop_h");
    if (!idle.node().IsMap()) d.fail("idle_per_stop_h", "expected a mapping goods class -> hours");
    for (const auto& kv : idle.node())
      p.idle_per_stop_h[kv.first.Scalar()] = idle.as_number(kv.second, "idle_per_stop_h." + kv.first.Scalar());
  }
  if (d.has("distance_classes")) {
    cfg.classes = parse_list<DistanceClass>(d, "distance_classes", [](const Doc& c) {
      return DistanceClass{c.text("name"), c.number("lower_km", 0.0), c.number("upper_km", kInf),
                           c.number("target_km")};
    });
  }
  if (d.has("regression")) {
    const Doc r = d.child("regression");
    cfg.fit = r.flag("fit", true);
    cfg.regression.allow_offset = r.flag("allow_offset", false);
    cfg.fixed_regression.a = r.number("a", cfg.fixed_regression.a);
    cfg.fixed_regression.b = r.number("b", cfg.fixed_regression.b);
    cfg.fixed_regression.c = r.number("c", cfg.fixed_regression.c);
  }
  if (d.has("start_candidates")) {
    const Doc sc = d.child("start_candidates");
    if (!sc.node().IsMap()) d.fail("start_candidates", "expected a mapping hours -> start list");
    cfg.start_candidates.clear();
    for (const auto& kv : sc.node()) {
      const int hours = static_cast<int>(sc.as_number(kv.first, "start_candidates"));
      if (!kv.second.IsSequence()) sc.fail(kv.first.Scalar(), "expected a list of start hours");
      for (const auto& s : kv.second)
        cfg.start_candidates[hours].push_back(static_cast<int>(sc.as_number(s, "start_candidates")));
    }
  }
  if (d.has("target_curve")) {
    const Doc tc = d.child("target_curve");
    if (!tc.node().IsSequence()) d.fail("target_curve", "expected a list of 24 values");
    cfg.target_curve.clear();
    for (const auto& v : tc.node()) cfg.target_curve.push_back(tc.as_number(v, "target_curve"));
    if (cfg.target_curve.size() != 24) d.fail("target_curve", "expected 24 values");
  }
  return cfg;
}

RunManifest load_manifest(const fs::path& path) {
  const Doc d = Doc::open(path);
  RunManifest m;
  m.catalog = d.path("catalog");
  if (d.has("synth")) m.synth = d.path("synth");
  if (d.has("fleet_bev")) m.fleet_bev = d.path("fleet_bev");
  if (d.has("fleet_ers")) m.fleet_ers = d.path("fleet_ers");
  if (d.has("fuel_chain")) m.fuel_chain = d.path("fuel_chain");
  if (d.has("out")) m.out = d.path("out");
  if (!d.has("scenarios") || !d.node()["scenarios"].IsSequence()) d.fail("scenarios", "expected a list of scenario kinds");
  const Doc list = d.child("scenarios");
  for (const auto& n : list.node()) {
    const std::string name = list.as_text(n, "scenarios");
    const ScenarioKind k = with_location(d, "scenarios", [&] { return scenario_kind_from_string(name); });
    for (ScenarioKind seen : m.scenarios)
      if (seen == k) d.fail("scenarios", "scenario " + name + " listed twice");
    m.scenarios.push_back(k);
  }
  m.horizon = static_cast<std::size_t>(d.number("horizon", static_cast<double>(m.horizon)));
  m.island = d.flag("island", m.island);
  m.co2_price = d.number("co2_price", m.co2_price);
  m.voll = d.number("voll", m.voll);
  if (d.has("wind_cap_onshore")) m.wind_cap_onshore = d.number("wind_cap_onshore");
  if (d.has("wind_cap_offshore")) m.wind_cap_offshore = d.number("wind_cap_offshore");
  m.depot_scale = d.number("depot_scale", m.depot_scale);
  m.away_scale = d.number("away_scale", m.away_scale);
  m.anchor_weekday = static_cast<int>(d.number("anchor_weekday", m.anchor_weekday));
  m.scale_to_working_days = d.flag("scale_to_working_days", m.scale_to_working_days);
  m.window_start = static_cast<std::size_t>(d.number("window_start", 0.0));
  m.jobs = static_cast<int>(d.number("jobs", m.jobs));
  m.seed = static_cast<unsigned long>(d.number("seed", 0.0));
  m.external_solver = d.text("external_solver", "");
  if (d.has("solver")) m.solver = parse_solver(d.child("solver"));
  if (m.jobs < 1) d.fail("jobs", "must be at least 1");
  return m;
}

}  // namespace hdvgrid
