#include "hdvgrid/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <thread>

#include "hdvgrid/charts.hpp"
#include "hdvgrid/config_io.hpp"

namespace hdvgrid {

namespace fs = std::filesystem;

ScenarioConfig scenario_config(const RunManifest& m, ScenarioKind kind) {
  ScenarioConfig cfg;
  cfg.kind = kind;
  cfg.horizon = m.horizon;
  cfg.island = m.island;
  cfg.co2_price = m.co2_price;
  cfg.voll = m.voll;
  cfg.wind_cap_onshore = m.wind_cap_onshore;
  cfg.wind_cap_offshore = m.wind_cap_offshore;
  cfg.depot_scale = m.depot_scale;
  cfg.away_scale = m.away_scale;
  cfg.anchor_weekday = m.anchor_weekday;
  cfg.solver = m.solver;
  validate(cfg);
  return cfg;
}

RunInputs load_inputs(const RunManifest& m) {
  RunInputs in;
  in.catalog = load_catalog(m.catalog);
  bool fleets = false, fuels = false;
  for (ScenarioKind k : m.scenarios) {
    fleets = fleets || uses_battery_fleet(k);
    fuels = fuels || uses_fuel_chain(k);
  }
  if (!fleets && !fuels) return in;
  if (m.synth.empty()) throw ConfigError("manifest", 0, "synth", "HDV scenarios need a synthesis configuration");
  in.synth = synthesize(load_synth_config(m.synth));
  const auto& profiles = in.synth.starts.profiles;
  if (!m.fleet_bev.empty()) in.bev = attach_profiles(load_fleet(m.fleet_bev), profiles);
  if (!m.fleet_ers.empty()) in.ers = attach_profiles(load_fleet(m.fleet_ers), profiles);
  if (!m.fuel_chain.empty()) in.chain = load_fuel_chain(m.fuel_chain);
  return in;
}

SolverFactory make_solver_factory(const RunManifest& m, const fs::path& work_dir) {
  if (m.external_solver.empty()) return [] { return std::make_unique<SimplexSolver>(); };
  const std::string cmd = m.external_solver;
  return [cmd, work_dir] {
    fs::create_directories(work_dir);
    return std::make_unique<ExternalSolver>(cmd, work_dir.string());
  };
}

ScenarioRun run_scenario(const RunInputs& in, const ScenarioConfig& cfg, LpSolver& solver,
                         bool scale_to_working_days) {
  ScenarioRun run;
  run.kind = cfg.kind;
  run.config = cfg;
  std::optional<FleetSpec> fleet;
  std::optional<FuelChainSpec> chain;
  if (uses_battery_fleet(cfg.kind)) {
    const auto& base = uses_catenary(cfg.kind) ? in.ers : in.bev;
    if (base) fleet = scale_availability(*base, cfg.depot_scale, cfg.away_scale);
  }
  if (uses_fuel_chain(cfg.kind)) chain = in.chain;
  const CheckedScenario sc = validate_scenario(cfg, in.catalog, fleet, chain);

  ExpandOptions eo;
  eo.horizon = cfg.horizon;
  eo.anchor_weekday = cfg.anchor_weekday;
  eo.scale_to_working_days = scale_to_working_days;
  const auto& profiles = in.synth.starts.profiles;
  HdvInputs hdv;
  double vehicles = 0.0;
  if (sc.fleet) {
    hdv.fleet_series = expand_to_horizon(profiles, *sc.fleet, eo);
    if (is_inflexible(cfg.kind)) hdv.plan = balanced_charging(*hdv.fleet_series, *sc.fleet);
    vehicles = hdv.fleet_series->vehicles();
  }
  if (sc.chain) {
    hdv.fuel = fuel_demand_series(profiles, *sc.chain, eo);
    for (const auto& p : profiles) vehicles += p.vehicles;
  }
  const ScenarioModel model = build_scenario_model(sc, hdv);
  const SolutionView sol = solver.solve(model.ir, cfg.solver);
  run.status = sol.status;
  if (sol.optimal()) {
    run.outcome = extract_outcome(sc, model, sol, vehicles);
    run.report = make_report(*run.outcome);
  } else {
    run.report.scenario = std::string(to_string(cfg.kind));
    run.report.horizon = cfg.horizon;
    run.error = std::string(to_string(sol.status));
    if (!sol.ray_tag.empty()) run.error += " (ray " + sol.ray_tag + ")";
    if (sol.status == SolveStatus::Infeasible)
      run.error += " (phase-1 residual " + format_number(sol.infeasibility) + ")";
  }
  return run;
}

const ScenarioRun* RunResult::find(ScenarioKind k) const {
  for (const auto& r : runs)
    if (r.kind == k) return &r;
  return nullptr;
}

int RunResult::exit_code() const {
  for (const auto& r : runs)
    if (r.status != SolveStatus::Optimal) return 1;
  return 0;
}

bool check_cost_orderings(const std::vector<ScenarioRun>& runs, std::vector<std::string>& log, double rel_tol) {
  using K = ScenarioKind;
  const std::pair<K, K> pairs[] = {
      {K::BEV_FLEX_V2G, K::BEV_FLEX}, {K::BEV_FLEX, K::BEV_INFLEX}, {K::BEV_FLEX_V2G, K::BEV_INFLEX},
      {K::ERS_FLEX_V2G, K::ERS_FLEX}, {K::ERS_FLEX, K::ERS_INFLEX}, {K::ERS_FLEX_V2G, K::ERS_INFLEX},
  };
  auto cost = [&](K k) -> std::optional<double> {
    for (const auto& r : runs)
      if (r.kind == k && r.outcome) return r.report.metrics.at("total_cost_eur_yr");
    return std::nullopt;
  };
  bool ok = true;
  for (const auto& [lo, hi] : pairs) {
    const auto a = cost(lo), b = cost(hi);
    if (!a || !b) continue;
    const bool pass = *a <= *b + rel_tol * std::max({1.0, std::abs(*a), std::abs(*b)});
    ok = ok && pass;
    log.push_back(std::string(pass ? "ok " : "VIOLATED ") + std::string(to_string(lo)) + " <= " +
                  std::string(to_string(hi)) + ": " + format_number(*a) + " <= " + format_number(*b));
  }
  return ok;
}

namespace {

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string(), 0, "", "cannot write file");
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace

RunResult run_manifest(const RunManifest& m, const RunInputs& in, const fs::path& out) {
  std::vector<ScenarioKind> kinds = m.scenarios;
  auto ref = std::find(kinds.begin(), kinds.end(), ScenarioKind::REF);
  if (ref != kinds.end()) std::rotate(kinds.begin(), ref, ref + 1);

  std::vector<ScenarioRun> runs(kinds.size());
  std::vector<std::exception_ptr> errors(kinds.size());
  auto run_one = [&](std::size_t i) {
    try {
      const std::string name(to_string(kinds[i]));
      const fs::path work = out.empty() ? fs::temp_directory_path() / ("hdvgrid_" + name) : out / name / "solver";
      auto solver = make_solver_factory(m, work)();
      runs[i] = run_scenario(in, scenario_config(m, kinds[i]), *solver, m.scale_to_working_days);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  std::size_t first = 0;
  if (!kinds.empty() && kinds[0] == ScenarioKind::REF) {
    run_one(0);
    first = 1;
  }
  std::atomic<std::size_t> next{first};
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, m.jobs)),
                                                    kinds.size() > first ? kinds.size() - first : 0);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < kinds.size();) run_one(i);
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  RunResult result;
  result.runs = std::move(runs);
  const ScenarioRun* reference = result.find(ScenarioKind::REF);
  if (reference && reference->outcome) {
    const ScenarioReport ref_report = reference->report;
    for (auto& r : result.runs)
      if (r.outcome) r.report = diff_report(r.report, ref_report);
  }
  result.orderings_ok = check_cost_orderings(result.runs, result.log);

  if (!out.empty()) {
    std::vector<std::string> status{"scenario,status,total_cost_eur_yr"};
    std::vector<ScenarioReport> reports;
    for (const auto& r : result.runs) {
      const std::string name(to_string(r.kind));
      emit_outputs(out / name, r.report, r.outcome ? &*r.outcome : nullptr, m.window_start);
      auto it = r.report.metrics.find("total_cost_eur_yr");
      status.push_back(name + "," + std::string(to_string(r.status)) + "," +
                       (it != r.report.metrics.end() ? format_number(it->second) : ""));
      if (r.outcome) reports.push_back(r.report);
    }
    write_lines(out / "status.csv", status);
    write_lines(out / "orderings.log", result.log);
    emit_comparison(out, reports);
  }
  return result;
}

SweepAxis sweep_axis_from_string(std::string_view s) {
  if (s == "depot") return SweepAxis::Depot;
  if (s == "away") return SweepAxis::Away;
  if (s == "windcap") return SweepAxis::WindCap;
  if (s == "island") return SweepAxis::Island;
  throw ValidationError("unknown sweep axis '" + std::string(s) + "' (depot, away, windcap, island)");
}

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Depot: return "depot";
    case SweepAxis::Away: return "away";
    case SweepAxis::WindCap: return "windcap";
    case SweepAxis::Island: return "island";
  }
  return "?";
}

std::vector<SweepPoint> sweep_points(SweepAxis axis) {
  std::vector<SweepPoint> pts;
  switch (axis) {
    case SweepAxis::Depot:
      for (double v : {1.0, 0.5, 0.25}) {
        Sensitivities s;
        s.depot_scale = v;
        pts.push_back({"depot_" + format_number(v), s});
      }
      break;
    case SweepAxis::Away:
      for (double v : {1.0, 2.0, 4.0}) {
        Sensitivities s;
        s.away_scale = v;
        pts.push_back({"away_" + format_number(v), s});
      }
      break;
    case SweepAxis::WindCap: {
      pts.push_back({"uncapped", {}});
      Sensitivities s;
      s.wind_cap_onshore = 100000.0;
      s.wind_cap_offshore = 30000.0;
      pts.push_back({"capped", s});
      break;
    }
    case SweepAxis::Island: {
      Sensitivities a, b;
      a.island = false;
      b.island = true;
      pts.push_back({"interconnected", a});
      pts.push_back({"island", b});
      break;
    }
  }
  return pts;
}

int SweepResult::exit_code() const {
  for (const auto& r : results)
    if (r.exit_code() != 0) return 1;
  return 0;
}

SweepResult run_sweep(const RunManifest& m, const RunInputs& in, SweepAxis axis, const fs::path& out) {
  if (axis == SweepAxis::Depot || axis == SweepAxis::Away)
    for (ScenarioKind k : m.scenarios)
      if (k != ScenarioKind::REF && !uses_battery_fleet(k))
        throw ValidationError("sweep axis " + std::string(to_string(axis)) + " does not apply to scenario " +
                              std::string(to_string(k)));
  SweepResult sr;
  sr.axis = axis;
  sr.points = sweep_points(axis);
  const fs::path base = out.empty() ? fs::path() : out / ("sweep_" + std::string(to_string(axis)));
  for (const auto& p : sr.points) {
    RunManifest mp = m;
    const auto& s = p.sensitivities;
    if (s.island) mp.island = *s.island;
    if (s.wind_cap_onshore) mp.wind_cap_onshore = s.wind_cap_onshore;
    if (s.wind_cap_offshore) mp.wind_cap_offshore = s.wind_cap_offshore;
    if (s.depot_scale) mp.depot_scale = *s.depot_scale;
    if (s.away_scale) mp.away_scale = *s.away_scale;
    sr.results.push_back(run_manifest(mp, in, base.empty() ? base : base / p.label));
  }
  // Later points are tighter (depot, windcap, island) or looser (away).
  const int direction = axis == SweepAxis::Away ? -1 : 1;
  std::vector<std::string> table{"scenario,point,status,total_cost_eur_yr,delta_cost_eur_yr"};
  std::vector<std::string> labels;
  std::vector<double> costs;
  for (ScenarioKind k : m.scenarios) {
    const std::string name(to_string(k));
    double prev = 0.0;
    bool have_prev = false;
    std::string prev_label;
    for (std::size_t i = 0; i < sr.points.size(); ++i) {
      const ScenarioRun* r = sr.results[i].find(k);
      std::string row = name + "," + sr.points[i].label + "," + std::string(to_string(r->status)) + ",";
      if (!r->outcome) {
        table.push_back(row + ",");
        have_prev = false;
        continue;
      }
      const double c = r->report.metrics.at("total_cost_eur_yr");
      auto d = r->report.deltas.find("total_cost_eur_yr");
      row += format_number(c) + "," + (d != r->report.deltas.end() ? format_number(d->second) : "");
      table.push_back(row);
      labels.push_back(name + "@" + sr.points[i].label);
      costs.push_back(c / 1e9);
      if (have_prev) {
        const double tol = 1e-6 * std::max({1.0, std::abs(c), std::abs(prev)});
        const bool pass = direction > 0 ? c >= prev - tol : c <= prev + tol;
        sr.monotone_ok = sr.monotone_ok && pass;
        sr.log.push_back(std::string(pass ? "ok " : "VIOLATED ") + name + " " + prev_label +
                         (direction > 0 ? " <= " : " >= ") + sr.points[i].label + ": " + format_number(prev) +
                         (direction > 0 ? " <= " : " >= ") + format_number(c));
      }
      prev = c;
      have_prev = true;
      prev_label = sr.points[i].label;
    }
  }
  if (!base.empty()) {
    write_lines(base / "sweep.csv", table);
    write_lines(base / "monotonicity.log", sr.log);
    write_bar_chart(base / "sweep.svg", "Sweep over " + std::string(to_string(axis)), "bn EUR/yr", labels, costs);
  }
  return sr;
}

ScenarioReport compare_summaries(const fs::path& scenario, const fs::path& reference, const fs::path& out_csv) {
  const ScenarioReport a = read_summary(scenario);
  const ScenarioReport b = read_summary(reference);
  ScenarioReport d = diff_report(a, b);
  if (!out_csv.empty()) {
    if (out_csv.has_parent_path()) fs::create_directories(out_csv.parent_path());
    std::vector<std::string> lines{"metric," + a.scenario + "," + b.scenario + ",delta"};
    for (const auto& [k, v] : d.deltas) {
      auto ia = a.metrics.find(k);
      auto ib = b.metrics.find(k);
      lines.push_back(k + "," + (ia != a.metrics.end() ? format_number(ia->second) : "") + "," +
                      (ib != b.metrics.end() ? format_number(ib->second) : "") + "," + format_number(v));
    }
    write_lines(out_csv, lines);
  }
  return d;
}

SynthOutputs run_synth(const fs::path& synth_config, const fs::path& fleet_path,
                       const std::optional<fs::path>& fuel_chain, std::size_t horizon, int anchor_weekday,
                       const fs::path& out) {
  const SynthResult res = synthesize(load_synth_config(synth_config));
  fs::create_directories(out / "series");
  write_stylized_table(out / "stylized_profiles.csv", res.stylized);
  write_start_table(out / "start_times.csv", res.starts);
  const FleetSpec fleet = attach_profiles(load_fleet(fleet_path), res.starts.profiles);
  ExpandOptions eo;
  eo.horizon = horizon;
  eo.anchor_weekday = anchor_weekday;
  const FleetSeries series = expand_to_horizon(res.starts.profiles, fleet, eo);
  write_fleet_series(out / "series", series);
  write_plan(out / "balanced_plan.csv", balanced_charging(series, fleet));
  const FuelChainSpec chain = fuel_chain ? load_fuel_chain(*fuel_chain) : FuelChainSpec::defaults();
  write_fuel_demand(out / "fuel_demand.csv", fuel_demand_series(res.starts.profiles, chain, eo));
  return {res.stylized.size(), res.starts.profiles.size()};
}

}  // namespace hdvgrid
