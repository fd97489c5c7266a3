#pragma once

// Scenario orchestration: manifest loading, the REF-first fan-out over worker
// threads, sensitivity sweeps, summary comparison and profile synthesis runs.

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hdvgrid/charging.hpp"
#include "hdvgrid/core.hpp"
#include "hdvgrid/lp.hpp"
#include "hdvgrid/model_build.hpp"
#include "hdvgrid/profiles.hpp"
#include "hdvgrid/report.hpp"

namespace hdvgrid {

struct RunManifest {
  std::filesystem::path catalog;
  std::filesystem::path synth;
  std::filesystem::path fleet_bev;
  std::filesystem::path fleet_ers;
  std::filesystem::path fuel_chain;
  std::filesystem::path out = "out";
  std::vector<ScenarioKind> scenarios;
  std::size_t horizon = 168;
  bool island = false;
  double co2_price = 100.0;
  double voll = 3000.0;
  std::optional<double> wind_cap_onshore;
  std::optional<double> wind_cap_offshore;
  double depot_scale = 1.0;
  double away_scale = 1.0;
  int anchor_weekday = 0;
  bool scale_to_working_days = true;
  /// First hour of the five-day chart window.
  std::size_t window_start = 0;
  int jobs = 1;
  /// Recorded only; the bundled relation set is pre-generated.
  unsigned long seed = 0;
  /// Command for ExternalSolver; empty selects the built-in simplex.
  std::string external_solver;
  SolverOptions solver;
};

/// Paths are resolved relative to the manifest file.
RunManifest load_manifest(const std::filesystem::path& path);
ScenarioConfig scenario_config(const RunManifest& m, ScenarioKind kind);

/// Immutable inputs shared by every scenario of a run.
struct RunInputs {
  TechnologyCatalog catalog;
  SynthResult synth;
  std::optional<FleetSpec> bev, ers;
  std::optional<FuelChainSpec> chain;
};

RunInputs load_inputs(const RunManifest& m);

struct ScenarioRun {
  ScenarioKind kind = ScenarioKind::REF;
  ScenarioConfig config;
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<SystemOutcome> outcome;
  ScenarioReport report;
  std::string error;  // solver status detail or exception text
};

using SolverFactory = std::function<std::unique_ptr<LpSolver>()>;

/// Built-in simplex, or ExternalSolver writing into `work_dir` when the
/// manifest names a command.
SolverFactory make_solver_factory(const RunManifest& m, const std::filesystem::path& work_dir);

/// Builds, solves and reports one scenario. Throws on configuration errors;
/// solver failures are returned in the status.
ScenarioRun run_scenario(const RunInputs& in, const ScenarioConfig& cfg, LpSolver& solver,
                         bool scale_to_working_days = true);

struct RunResult {
  std::vector<ScenarioRun> runs;  // REF first, then manifest order
  std::vector<std::string> log;   // ordering checks, one line each
  bool orderings_ok = true;

  const ScenarioRun* find(ScenarioKind k) const;
  /// 0 when every scenario is optimal, 1 otherwise.
  int exit_code() const;
};

/// Weak cost orderings between flexibility variants present in the run.
/// Appends one line per check to `log`; returns false on any violation
/// beyond `rel_tol`.
bool check_cost_orderings(const std::vector<ScenarioRun>& runs, std::vector<std::string>& log,
                          double rel_tol = 1e-6);

/// Runs REF first, then the rest over `jobs` threads. Writes per-scenario
/// outputs below `out` unless `out` is empty.
RunResult run_manifest(const RunManifest& m, const RunInputs& in, const std::filesystem::path& out);

enum class SweepAxis { Depot, Away, WindCap, Island };

SweepAxis sweep_axis_from_string(std::string_view s);
std::string_view to_string(SweepAxis a);

struct SweepPoint {
  std::string label;
  Sensitivities sensitivities;
};
std::vector<SweepPoint> sweep_points(SweepAxis axis);

struct SweepResult {
  SweepAxis axis = SweepAxis::Depot;
  std::vector<SweepPoint> points;
  std::vector<RunResult> results;  // one per point
  std::vector<std::string> log;
  bool monotone_ok = true;

  int exit_code() const;
};

/// Throws ValidationError when the axis does not apply to a scenario kind
/// (availability axes need a battery fleet).
SweepResult run_sweep(const RunManifest& m, const RunInputs& in, SweepAxis axis,
                      const std::filesystem::path& out);

/// Scenario-minus-reference deltas of two summary documents, written as CSV.
ScenarioReport compare_summaries(const std::filesystem::path& scenario, const std::filesystem::path& reference,
                                 const std::filesystem::path& out_csv);

/// Stylized table, start-time table, per-profile series, fuel demand and the
/// balanced charging plan for one fleet.
struct SynthOutputs {
  std::size_t stylized_bins = 0;
  std::size_t profiles = 0;
};
SynthOutputs run_synth(const std::filesystem::path& synth_config, const std::filesystem::path& fleet,
                       const std::optional<std::filesystem::path>& fuel_chain, std::size_t horizon,
                       int anchor_weekday, const std::filesystem::path& out);

}  // namespace hdvgrid
