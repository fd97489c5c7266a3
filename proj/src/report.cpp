#include "hdvgrid/report.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

#include "hdvgrid/charts.hpp"
#include "hdvgrid/config_io.hpp"
#include "json.hpp"

namespace hdvgrid {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void add_into(std::vector<double>& acc, const std::vector<int>& cols, const SolutionView& sol, double f = 1.0) {
  for (std::size_t h = 0; h < cols.size(); ++h) acc[h] += f * sol.x[cols[h]];
}

// Averages and shares have no meaningful zero when a side lacks them.
bool is_ratio(const std::string& key) {
  return key.rfind("avg_", 0) == 0 || key.rfind("mean_", 0) == 0 || key == "renewable_share" ||
         key.rfind("capacity_share:", 0) == 0;
}

}  // namespace

SystemOutcome extract_outcome(const CheckedScenario& sc, const ScenarioModel& m, const SolutionView& sol,
                              double vehicles) {
  if (!sol.optimal()) throw ValidationError("outcome needs an optimal solution");
  const auto& cat = sc.catalog;
  const std::size_t H = m.horizon;
  const std::size_t f = m.focal;
  SystemOutcome o;
  o.scenario = std::string(to_string(m.kind));
  o.kind = m.kind;
  o.status = sol.status;
  o.horizon = H;
  o.year_fraction = m.year_fraction;
  o.objective = sol.objective;
  o.vehicles = vehicles;
  o.focal = m.nodes[f];

  const std::vector<double> zero(H, 0.0);
  o.price.resize(H);
  for (std::size_t h = 0; h < H; ++h) o.price[h] = sol.duals[m.balance[f][h]];
  const auto& load = cat.series.at(cat.nodes[f].load).values;
  o.load.assign(load.begin(), load.begin() + static_cast<std::ptrdiff_t>(H));
  o.vre_potential = zero;

  for (const auto& g : m.generators) {
    const GenerationTech* tech = cat.find_generator(g.tech);
    std::vector<double> gen = zero;
    add_into(gen, g.gen, sol);
    double e = 0.0;
    for (double v : gen) e += v * tech->emission_factor;
    o.emissions_t[m.nodes[g.node]] += e;
    if (g.node != f) continue;
    const double cap = g.cap >= 0 ? sol.x[g.cap] : g.fixed_cap;
    o.capacity_mw[g.tech] = cap;
    o.renewable[g.tech] = tech->renewable;
    if (tech->kind == GenKind::VariableRenewable) {
      const auto& a = cat.series.at(tech->availability).values;
      for (std::size_t h = 0; h < H; ++h) o.vre_potential[h] += cap * a[h];
    }
    o.generation[g.tech] = std::move(gen);
  }
  for (const auto& n : m.nodes) o.emissions_t.emplace(n, 0.0);
  o.residual_load.resize(H);
  for (std::size_t h = 0; h < H; ++h) o.residual_load[h] = o.load[h] - o.vre_potential[h];

  for (const auto& s : m.storages) {
    if (s.node != f) continue;
    o.storage_energy_mwh[s.tech] = s.energy_cap >= 0 ? sol.x[s.energy_cap] : s.fixed_energy;
    o.storage_power_mw[s.tech] = s.discharge_cap >= 0 ? sol.x[s.discharge_cap] : s.fixed_discharge;
    std::vector<double> ch = zero, dis = zero;
    add_into(ch, s.charge, sol);
    add_into(dis, s.discharge, sol);
    o.storage_losses_mwh += sum(ch) - sum(dis);
    o.storage_charge[s.tech] = std::move(ch);
    o.storage_discharge[s.tech] = std::move(dis);
  }

  o.imports = o.exports = o.shed = zero;
  for (std::size_t k = 0; k < m.flows.size(); ++k) {
    const auto& fv = m.flows[k];
    const double keep = 1.0 - cat.interconnectors[k].loss;
    if (fv.from == f) {
      add_into(o.exports, fv.forward, sol);
      add_into(o.imports, fv.backward, sol, keep);
    } else if (fv.to == f) {
      add_into(o.imports, fv.forward, sol, keep);
      add_into(o.exports, fv.backward, sol);
    }
  }
  add_into(o.shed, m.shed[f], sol);

  o.hdv_purchase = m.fixed_hdv_mw;
  o.v2g = o.electrolysis = zero;
  for (const auto& fv : m.fleet) {
    add_into(o.hdv_purchase, fv.g2b, sol);
    if (!fv.v2g.empty()) add_into(o.v2g, fv.v2g, sol);
  }
  for (const auto& e : m.electrolyzers) {
    add_into(o.electrolysis, e.draw, sol, 1.0 + e.efficiency * m.transport_factor);
    o.electrolysis_mw[e.tech] = sol.x[e.cap];
  }
  for (std::size_t h = 0; h < H; ++h) o.hdv_purchase[h] += o.electrolysis[h];
  if (m.synthesis_cap >= 0) o.synthesis_mw = sol.x[m.synthesis_cap];
  return o;
}

ChargingPrice average_charging_price(const std::vector<double>& prices, const std::vector<double>& buys,
                                     const std::vector<double>& sells) {
  if (buys.size() != prices.size() || (!sells.empty() && sells.size() != prices.size()))
    throw ValidationError("price and volume series differ in length");
  double pb = 0.0, ps = 0.0, b = 0.0, s = 0.0;
  for (std::size_t h = 0; h < prices.size(); ++h) {
    pb += prices[h] * buys[h];
    b += buys[h];
    if (!sells.empty()) {
      ps += prices[h] * sells[h];
      s += sells[h];
    }
  }
  ChargingPrice r;
  if (b != 0.0) r.gross = pb / b;
  if (b - s != 0.0) r.netted = (pb - ps) / (b - s);
  return r;
}

double renewable_share(const SystemOutcome& o) {
  double re = 0.0;
  for (const auto& [tech, gen] : o.generation)
    if (o.renewable.count(tech) && o.renewable.at(tech)) re += sum(gen);
  const double demand = sum(o.load) + sum(o.hdv_purchase) - sum(o.v2g) + o.storage_losses_mwh;
  return demand > 0.0 ? re / demand : 0.0;
}

std::map<std::string, double> emissions(const SystemOutcome& o) { return o.emissions_t; }

ScenarioReport make_report(const SystemOutcome& o) {
  ScenarioReport r;
  r.scenario = o.scenario;
  r.horizon = o.horizon;
  r.vehicles = o.vehicles;
  auto& x = r.metrics;
  const double a = o.year_fraction > 0.0 ? 1.0 / o.year_fraction : 0.0;
  const double twh = a / 1e6;
  x["total_cost_eur_yr"] = o.objective * a;
  const double load = sum(o.load);
  if (load > 0.0) {
    double pl = 0.0;
    for (std::size_t h = 0; h < o.horizon; ++h) pl += o.price[h] * o.load[h];
    x["mean_price_eur_mwh"] = pl / load;
  }
  if (o.horizon > 0) x["avg_price_eur_mwh"] = sum(o.price) / static_cast<double>(o.horizon);
  const auto cp = average_charging_price(o.price, o.hdv_purchase, o.v2g);
  if (cp.gross) x["avg_charging_price_gross_eur_mwh"] = *cp.gross;
  if (cp.netted && sum(o.hdv_purchase) > 0.0) x["avg_charging_price_netted_eur_mwh"] = *cp.netted;
  x["hdv_demand_gross_twh"] = sum(o.hdv_purchase) * twh;
  x["hdv_demand_net_twh"] = (sum(o.hdv_purchase) - sum(o.v2g)) * twh;
  x["v2g_twh"] = sum(o.v2g) * twh;
  x["electrolysis_demand_twh"] = sum(o.electrolysis) * twh;
  x["electricity_demand_twh"] = (load + sum(o.hdv_purchase) - sum(o.v2g) + o.storage_losses_mwh) * twh;
  x["storage_losses_twh"] = o.storage_losses_mwh * twh;
  x["imports_twh"] = sum(o.imports) * twh;
  x["exports_twh"] = sum(o.exports) * twh;
  x["shed_twh"] = sum(o.shed) * twh;
  x["renewable_share"] = renewable_share(o);
  double total_cap = 0.0;
  for (const auto& [tech, cap] : o.capacity_mw) total_cap += cap;
  for (const auto& [tech, cap] : o.capacity_mw) {
    x["capacity_mw:" + tech] = cap;
    if (total_cap > 0.0) x["capacity_share:" + tech] = cap / total_cap;
  }
  for (const auto& [tech, gen] : o.generation) x["generation_twh:" + tech] = sum(gen) * twh;
  for (const auto& [tech, e] : o.storage_energy_mwh) x["storage_energy_mwh:" + tech] = e;
  for (const auto& [tech, p] : o.storage_power_mw) x["storage_power_mw:" + tech] = p;
  for (const auto& [tech, p] : o.electrolysis_mw) x["electrolysis_mw:" + tech] = p;
  if (!o.electrolysis_mw.empty()) {
    double total = 0.0;
    for (const auto& [tech, p] : o.electrolysis_mw) total += p;
    x["electrolysis_mw"] = total;
  }
  if (o.kind == ScenarioKind::ICEV_PTL) x["synthesis_mw"] = o.synthesis_mw;
  for (const auto& [node, t] : o.emissions_t) x["emissions_t_yr:" + node] = t * a;
  x["vehicles"] = o.vehicles;
  return r;
}

ScenarioReport diff_report(const ScenarioReport& scenario, const ScenarioReport& reference) {
  if (scenario.horizon != reference.horizon)
    throw ValidationError("cannot compare horizons " + std::to_string(scenario.horizon) + " and " +
                          std::to_string(reference.horizon));
  ScenarioReport r = scenario;
  r.deltas.clear();
  std::set<std::string> keys;
  for (const auto& [k, v] : scenario.metrics) keys.insert(k);
  for (const auto& [k, v] : reference.metrics) keys.insert(k);
  keys.erase("vehicles");
  for (const auto& k : keys) {
    auto a = scenario.metrics.find(k);
    auto b = reference.metrics.find(k);
    const bool both = a != scenario.metrics.end() && b != reference.metrics.end();
    if (!both && is_ratio(k)) continue;
    const double va = a != scenario.metrics.end() ? a->second : 0.0;
    const double vb = b != reference.metrics.end() ? b->second : 0.0;
    r.deltas[k] = va - vb;
  }
  const double vehicles = std::max(scenario.vehicles, reference.vehicles);
  if (vehicles > 0.0) r.deltas["cost_per_vehicle_eur_yr"] = r.deltas["total_cost_eur_yr"] / vehicles;
  return r;
}

std::map<std::string, double> dataset_targets(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::REF: return {{"mean_price_eur_mwh", 84.9}};
    case ScenarioKind::BEV_FLEX_V2G:
      return {{"delta_cost_bn_eur_yr", 1.8}, {"cost_per_vehicle_eur_yr", 5600}, {"renewable_share", 0.84}};
    case ScenarioKind::BEV_FLEX: return {{"delta_cost_bn_eur_yr", 2.3}, {"cost_per_vehicle_eur_yr", 7200}};
    case ScenarioKind::BEV_INFLEX: return {{"delta_cost_bn_eur_yr", 3.8}, {"cost_per_vehicle_eur_yr", 11900}};
    case ScenarioKind::FCEV_CENTRAL:
      return {{"delta_cost_bn_eur_yr", 12.7}, {"cost_per_vehicle_eur_yr", 39700}, {"electrolysis_gw", 13.5}};
    case ScenarioKind::FCEV_ONSITE:
      return {{"delta_cost_bn_eur_yr", 12.6},
              {"cost_per_vehicle_eur_yr", 39700},
              {"electrolysis_gw", 19.1},
              {"p2g2p_power_gw", 9.4},
              {"p2g2p_energy_twh", 6.0},
              {"renewable_share", 0.83}};
    case ScenarioKind::ICEV_PTL:
      return {{"delta_cost_bn_eur_yr", 16.8}, {"cost_per_vehicle_eur_yr", 52700}, {"electrolysis_gw", 24.4}};
    default: return {};
  }
}

std::string summary_json(const ScenarioReport& report) {
  json j;
  j["scenario"] = report.scenario;
  j["horizon"] = report.horizon;
  j["vehicles"] = report.vehicles;
  j["metrics"] = json::object();
  for (const auto& [k, v] : report.metrics) j["metrics"][k] = v;
  j["deltas"] = json::object();
  for (const auto& [k, v] : report.deltas) j["deltas"][k] = v;
  j["dataset_targets"] = json::object();
  try {
    for (const auto& [k, v] : dataset_targets(scenario_kind_from_string(report.scenario)))
      j["dataset_targets"][k] = v;
  } catch (const std::exception&) {
  }
  return j.dump(2) + "\n";
}

ScenarioReport read_summary(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "", "cannot open summary");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string(), 0, "", e.what());
  }
  ScenarioReport r;
  try {
    r.scenario = j.at("scenario").get<std::string>();
    r.horizon = j.at("horizon").get<std::size_t>();
    r.vehicles = j.value("vehicles", 0.0);
    for (const auto& [k, v] : j.at("metrics").items()) r.metrics[k] = v.get<double>();
    if (j.contains("deltas"))
      for (const auto& [k, v] : j.at("deltas").items()) r.deltas[k] = v.get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(path.string(), 0, "", e.what());
  }
  return r;
}

void emit_outputs(const fs::path& dir, const ScenarioReport& report, const SystemOutcome* o,
                  std::size_t window_start) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(dir.string(), 0, "", "cannot create output directory");
  auto open = [](const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError(p.string(), 0, "", "cannot write file");
    return out;
  };
  {
    auto out = open(dir / "metrics.csv");
    out << "metric,value,delta\n";
    std::set<std::string> keys;
    for (const auto& [k, v] : report.metrics) keys.insert(k);
    for (const auto& [k, v] : report.deltas) keys.insert(k);
    for (const auto& k : keys) {
      out << k << ',';
      if (auto it = report.metrics.find(k); it != report.metrics.end()) out << format_number(it->second);
      out << ',';
      if (auto it = report.deltas.find(k); it != report.deltas.end()) out << format_number(it->second);
      out << '\n';
    }
  }
  {
    auto out = open(dir / "summary.json");
    out << summary_json(report);
  }
  if (!o) return;
  {
    auto out = open(dir / "hourly.csv");
    out << "hour,price_EUR_MWh,load_MW,vre_potential_MW,residual_load_MW,hdv_purchase_MW,v2g_MW,"
           "electrolysis_MW,storage_charge_MW,storage_discharge_MW,imports_MW,exports_MW,shed_MW";
    for (const auto& [tech, gen] : o->generation) out << ",gen_" << tech << "_MW";
    out << '\n';
    for (std::size_t h = 0; h < o->horizon; ++h) {
      double ch = 0.0, dis = 0.0;
      for (const auto& [t, v] : o->storage_charge) ch += v[h];
      for (const auto& [t, v] : o->storage_discharge) dis += v[h];
      out << h;
      for (double v : {o->price[h], o->load[h], o->vre_potential[h], o->residual_load[h], o->hdv_purchase[h],
                       o->v2g[h], o->electrolysis[h], ch, dis, o->imports[h], o->exports[h], o->shed[h]})
        out << ',' << format_number(v);
      for (const auto& [tech, gen] : o->generation) out << ',' << format_number(gen[h]);
      out << '\n';
    }
  }
  // Five-day panel: supply stacked above zero, HDV and storage demand below,
  // load and residual load as lines.
  const std::size_t begin = std::min(window_start, o->horizon);
  const std::size_t end = std::min(o->horizon, begin + 120);
  auto cut = [&](const std::vector<double>& v, double sign = 1.0) {
    std::vector<double> w;
    for (std::size_t h = begin; h < end; ++h) w.push_back(sign * v[h] / 1000.0);
    return w;
  };
  std::vector<Series> stacked, lines;
  for (const auto& [tech, gen] : o->generation) stacked.push_back({tech, cut(gen)});
  std::vector<double> ch(o->horizon, 0.0), dis(o->horizon, 0.0);
  for (const auto& [t, v] : o->storage_charge)
    for (std::size_t h = 0; h < o->horizon; ++h) ch[h] += v[h];
  for (const auto& [t, v] : o->storage_discharge)
    for (std::size_t h = 0; h < o->horizon; ++h) dis[h] += v[h];
  stacked.push_back({"storage discharge", cut(dis)});
  stacked.push_back({"imports", cut(o->imports)});
  stacked.push_back({"HDV discharging to the grid", cut(o->v2g)});
  stacked.push_back({"HDV demand", cut(o->hdv_purchase, -1.0)});
  stacked.push_back({"storage charging", cut(ch, -1.0)});
  stacked.push_back({"exports", cut(o->exports, -1.0)});
  lines.push_back({"load", cut(o->load)});
  lines.push_back({"residual load", cut(o->residual_load)});
  write_time_panel(dir / "timeseries.svg", report.scenario + ": five-day dispatch", "GW", stacked, lines);
}

void emit_comparison(const fs::path& dir, const std::vector<ScenarioReport>& reports) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(dir.string(), 0, "", "cannot create output directory");
  {
    std::ofstream out(dir / "comparison.csv", std::ios::binary);
    if (!out) throw ConfigError((dir / "comparison.csv").string(), 0, "", "cannot write file");
    out << "scenario,metric,value,delta\n";
    for (const auto& r : reports) {
      std::set<std::string> keys;
      for (const auto& [k, v] : r.metrics) keys.insert(k);
      for (const auto& [k, v] : r.deltas) keys.insert(k);
      for (const auto& k : keys) {
        out << r.scenario << ',' << k << ',';
        if (auto it = r.metrics.find(k); it != r.metrics.end()) out << format_number(it->second);
        out << ',';
        if (auto it = r.deltas.find(k); it != r.deltas.end()) out << format_number(it->second);
        out << '\n';
      }
    }
  }
  std::vector<std::string> names, hdv_names;
  std::vector<double> dcost, ddemand;
  for (const auto& r : reports) {
    names.push_back(r.scenario);
    if (r.scenario == "REF") continue;
    hdv_names.push_back(r.scenario);
    auto get = [&](const char* k) {
      auto it = r.deltas.find(k);
      return it == r.deltas.end() ? 0.0 : it->second;
    };
    dcost.push_back(get("total_cost_eur_yr") / 1e9);
    ddemand.push_back(get("electricity_demand_twh"));
  }
  write_bar_chart(dir / "cost_delta.svg", "Change in yearly power sector costs", "bn EUR/yr", hdv_names, dcost);
  write_bar_chart(dir / "demand_delta.svg", "Change in electricity demand", "TWh/yr", hdv_names, ddemand);

  auto mix = [&](const std::string& prefix, double scale, bool delta) {
    std::set<std::string> techs;
    for (const auto& r : reports)
      for (const auto& [k, v] : r.metrics)
        if (k.rfind(prefix, 0) == 0) techs.insert(k.substr(prefix.size()));
    std::vector<Series> out;
    for (const auto& t : techs) {
      Series s{t, {}};
      for (const auto& r : reports) {
        if (delta && r.scenario == "REF") continue;
        const auto& src = delta ? r.deltas : r.metrics;
        auto it = src.find(prefix + t);
        s.values.push_back(it == src.end() ? 0.0 : it->second * scale);
      }
      out.push_back(std::move(s));
    }
    return out;
  };
  write_stacked_bars(dir / "capacity.svg", "Generation capacity", "GW", names, mix("capacity_mw:", 1e-3, false));
  write_stacked_bars(dir / "capacity_delta.svg", "Capacity change against the reference", "GW", hdv_names,
                     mix("capacity_mw:", 1e-3, true));
  write_stacked_bars(dir / "generation.svg", "Yearly generation", "TWh", names,
                     mix("generation_twh:", 1.0, false));
  write_stacked_bars(dir / "generation_delta.svg", "Generation change against the reference", "TWh", hdv_names,
                     mix("generation_twh:", 1.0, true));
}

}  // namespace hdvgrid
