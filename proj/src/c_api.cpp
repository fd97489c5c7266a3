#include "hdvgrid/hdvgrid.h"

#include <fstream>
#include <sstream>
#include <string>

#include "hdvgrid/config_io.hpp"
#include "hdvgrid/runner.hpp"

using namespace hdvgrid;

struct hdv_manifest {
  RunManifest m;
};

struct hdv_result {
  struct Row {
    std::string scenario, status;
    std::map<std::string, double> metrics, deltas;
  };
  std::vector<Row> rows;
  std::string log;
  bool checks_ok = true;
};

namespace {

thread_local std::string last_error;

template <typename F>
hdv_status guard(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const ConfigError& e) {
    last_error = e.what();
    return HDV_CONFIG_ERROR;
  } catch (const ValidationError& e) {
    last_error = e.what();
    return HDV_CONFIG_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return HDV_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown error";
    return HDV_INTERNAL_ERROR;
  }
}

hdv_status bad(const char* what) {
  last_error = what;
  return HDV_BAD_ARGUMENT;
}

void add_runs(hdv_result& r, const RunResult& res, const std::string& suffix) {
  for (const auto& run : res.runs)
    r.rows.push_back({std::string(to_string(run.kind)) + suffix,
                      run.error.empty() ? std::string(to_string(run.status)) : run.error, run.report.metrics,
                      run.report.deltas});
  for (const auto& l : res.log) r.log += l + "\n";
  r.checks_ok = r.checks_ok && res.orderings_ok;
}

}  // namespace

extern "C" {

const char* hdv_version(void) { return "1.0.0"; }
const char* hdv_last_error(void) { return last_error.c_str(); }

hdv_status hdv_manifest_load(const char* path, hdv_manifest** out) {
  if (!path || !out) return bad("null argument");
  return guard([&] {
    *out = new hdv_manifest{load_manifest(path)};
    return HDV_OK;
  });
}

void hdv_manifest_free(hdv_manifest* m) { delete m; }

hdv_status hdv_manifest_set_horizon(hdv_manifest* m, size_t hours) {
  if (!m) return bad("null manifest");
  if (hours == 0 || hours % 24 != 0) return bad("horizon must be a positive multiple of 24");
  m->m.horizon = hours;
  return HDV_OK;
}

hdv_status hdv_manifest_set_island(hdv_manifest* m, int island) {
  if (!m) return bad("null manifest");
  m->m.island = island != 0;
  return HDV_OK;
}

hdv_status hdv_manifest_set_wind_caps(hdv_manifest* m, double onshore_mw, double offshore_mw) {
  if (!m) return bad("null manifest");
  m->m.wind_cap_onshore = onshore_mw < 0 ? std::nullopt : std::optional<double>(onshore_mw);
  m->m.wind_cap_offshore = offshore_mw < 0 ? std::nullopt : std::optional<double>(offshore_mw);
  return HDV_OK;
}

hdv_status hdv_manifest_set_depot_scale(hdv_manifest* m, double scale) {
  if (!m) return bad("null manifest");
  if (!(scale > 0)) return bad("depot scale must be > 0");
  m->m.depot_scale = scale;
  return HDV_OK;
}

hdv_status hdv_manifest_set_away_scale(hdv_manifest* m, double scale) {
  if (!m) return bad("null manifest");
  if (!(scale > 0)) return bad("away scale must be > 0");
  m->m.away_scale = scale;
  return HDV_OK;
}

hdv_status hdv_manifest_set_jobs(hdv_manifest* m, int jobs) {
  if (!m) return bad("null manifest");
  if (jobs < 1) return bad("jobs must be at least 1");
  m->m.jobs = jobs;
  return HDV_OK;
}

hdv_status hdv_manifest_set_out(hdv_manifest* m, const char* dir) {
  if (!m || !dir) return bad("null argument");
  m->m.out = dir;
  return HDV_OK;
}

hdv_status hdv_manifest_set_scenarios(hdv_manifest* m, const char* kinds) {
  if (!m || !kinds) return bad("null argument");
  return guard([&] {
    std::vector<ScenarioKind> list;
    std::stringstream ss(kinds);
    for (std::string item; std::getline(ss, item, ',');) {
      if (item.empty()) continue;
      const ScenarioKind k = scenario_kind_from_string(item);
      for (ScenarioKind seen : list)
        if (seen == k) throw ValidationError("scenario " + item + " listed twice");
      list.push_back(k);
    }
    if (list.empty()) throw ValidationError("no scenarios given");
    m->m.scenarios = std::move(list);
    return HDV_OK;
  });
}

hdv_status hdv_manifest_out(const hdv_manifest* m, const char** dir) {
  if (!m || !dir) return bad("null argument");
  thread_local std::string s;
  s = m->m.out.string();
  *dir = s.c_str();
  return HDV_OK;
}

hdv_status hdv_run(const hdv_manifest* m, hdv_result** out) {
  if (!m || !out) return bad("null argument");
  return guard([&] {
    const RunInputs in = load_inputs(m->m);
    const RunResult res = run_manifest(m->m, in, m->m.out);
    auto* r = new hdv_result;
    add_runs(*r, res, "");
    *out = r;
    return res.exit_code() == 0 ? HDV_OK : HDV_NOT_OPTIMAL;
  });
}

hdv_status hdv_sweep(const hdv_manifest* m, const char* axis, hdv_result** out) {
  if (!m || !axis || !out) return bad("null argument");
  return guard([&] {
    const SweepAxis a = sweep_axis_from_string(axis);
    const RunInputs in = load_inputs(m->m);
    const SweepResult res = run_sweep(m->m, in, a, m->m.out);
    auto* r = new hdv_result;
    for (std::size_t i = 0; i < res.points.size(); ++i) add_runs(*r, res.results[i], "@" + res.points[i].label);
    for (const auto& l : res.log) r->log += l + "\n";
    r->checks_ok = r->checks_ok && res.monotone_ok;
    *out = r;
    return res.exit_code() == 0 ? HDV_OK : HDV_NOT_OPTIMAL;
  });
}

size_t hdv_result_count(const hdv_result* r) { return r ? r->rows.size() : 0; }

const char* hdv_result_scenario(const hdv_result* r, size_t i) {
  return r && i < r->rows.size() ? r->rows[i].scenario.c_str() : nullptr;
}

const char* hdv_result_status(const hdv_result* r, size_t i) {
  return r && i < r->rows.size() ? r->rows[i].status.c_str() : nullptr;
}

hdv_status hdv_result_metric(const hdv_result* r, size_t i, const char* key, double* value) {
  if (!r || !key || !value || i >= r->rows.size()) return bad("bad argument");
  auto it = r->rows[i].metrics.find(key);
  if (it == r->rows[i].metrics.end()) return bad("metric not present");
  *value = it->second;
  return HDV_OK;
}

hdv_status hdv_result_delta(const hdv_result* r, size_t i, const char* key, double* value) {
  if (!r || !key || !value || i >= r->rows.size()) return bad("bad argument");
  auto it = r->rows[i].deltas.find(key);
  if (it == r->rows[i].deltas.end()) return bad("delta not present");
  *value = it->second;
  return HDV_OK;
}

const char* hdv_result_log(const hdv_result* r) { return r ? r->log.c_str() : ""; }
int hdv_result_checks_ok(const hdv_result* r) { return r && r->checks_ok ? 1 : 0; }
void hdv_result_free(hdv_result* r) { delete r; }

hdv_status hdv_synth(const char* synth_config, const char* fleet, const char* fuel_chain, size_t horizon,
                     int anchor_weekday, const char* out_dir, size_t* bins, size_t* profiles) {
  if (!synth_config || !fleet || !out_dir) return bad("null argument");
  return guard([&] {
    std::optional<std::filesystem::path> chain;
    if (fuel_chain) chain = fuel_chain;
    const SynthOutputs o = run_synth(synth_config, fleet, chain, horizon, anchor_weekday, out_dir);
    if (bins) *bins = o.stylized_bins;
    if (profiles) *profiles = o.profiles;
    return HDV_OK;
  });
}

hdv_status hdv_compare(const char* scenario_summary, const char* reference_summary, const char* out_csv) {
  if (!scenario_summary || !reference_summary || !out_csv) return bad("null argument");
  return guard([&] {
    compare_summaries(scenario_summary, reference_summary, out_csv);
    return HDV_OK;
  });
}

hdv_status hdv_solve_file(const char* model_path, const char* solution_path) {
  if (!model_path || !solution_path) return bad("null argument");
  return guard([&] {
    std::ifstream in(model_path);
    if (!in) throw ConfigError(model_path, 0, "", "cannot open model");
    const ModelIR ir = ModelIR::read(in);
    const SolutionView sol = solve(ir);
    std::ofstream out(solution_path);
    if (!out) throw ConfigError(solution_path, 0, "", "cannot write solution");
    sol.write(out);
    return sol.optimal() ? HDV_OK : HDV_NOT_OPTIMAL;
  });
}

}  // extern "C"
