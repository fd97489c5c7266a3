#pragma once

// Result metrics of solved scenarios, scenario-vs-reference deltas and file
// outputs (metric tables, summary JSON, hourly series, SVG charts).
//
// Horizon quantities are annualized with 8760 / H. Energy in TWh/yr, cost in
// EUR/yr, capacity in MW, storage energy in MWh, emissions in t/yr.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hdvgrid/lp.hpp"
#include "hdvgrid/model_build.hpp"

namespace hdvgrid {

struct SystemOutcome {
  std::string scenario;
  ScenarioKind kind = ScenarioKind::REF;
  SolveStatus status = SolveStatus::Optimal;
  std::size_t horizon = 0;
  double year_fraction = 0.0;
  double objective = 0.0;  // EUR over the horizon
  double vehicles = 0.0;
  std::string focal;

  // Focal node, hourly MW.
  std::vector<double> price;  // EUR/MWh
  std::vector<double> load;
  std::vector<double> vre_potential;
  std::vector<double> residual_load;
  std::vector<double> hdv_purchase;  // grid draw of vehicles, catenary and electrolysis
  std::vector<double> v2g;
  std::vector<double> electrolysis;
  std::vector<double> imports, exports, shed;
  std::map<std::string, std::vector<double>> generation;
  std::map<std::string, std::vector<double>> storage_charge, storage_discharge;

  std::map<std::string, double> capacity_mw;
  std::map<std::string, bool> renewable;
  std::map<std::string, double> storage_energy_mwh, storage_power_mw;
  std::map<std::string, double> electrolysis_mw;
  double synthesis_mw = 0.0;
  double storage_losses_mwh = 0.0;    // over the horizon
  std::map<std::string, double> emissions_t;  // per node, over the horizon
};

/// Reads a solved scenario model. Requires an optimal solution.
SystemOutcome extract_outcome(const CheckedScenario& scenario, const ScenarioModel& model,
                              const SolutionView& solution, double vehicles = 0.0);

/// Price-weighted mean over purchases. Netted: (Σ p·buy − Σ p·sell) / Σ (buy − sell).
/// Absent when the denominator is zero.
struct ChargingPrice {
  std::optional<double> gross;
  std::optional<double> netted;
};
ChargingPrice average_charging_price(const std::vector<double>& prices, const std::vector<double>& buys,
                                     const std::vector<double>& sells);

/// Renewable generation of the focal node over its demand: load, HDV net
/// draw, electrolysis and storage losses. Exports are not demand.
double renewable_share(const SystemOutcome& o);
/// t CO2 over the horizon per node.
std::map<std::string, double> emissions(const SystemOutcome& o);

struct ScenarioReport {
  std::string scenario;
  std::size_t horizon = 0;
  double vehicles = 0.0;
  std::map<std::string, double> metrics;
  std::map<std::string, double> deltas;  // scenario minus reference
};

ScenarioReport make_report(const SystemOutcome& o);
/// Throws ValidationError on mismatched horizons.
ScenarioReport diff_report(const ScenarioReport& scenario, const ScenarioReport& reference);

/// Full-scale values a desk-scale run is not expected to reproduce.
std::map<std::string, double> dataset_targets(ScenarioKind kind);

/// metrics.csv, summary.json and, with an outcome, hourly.csv plus a five-day
/// time-series chart.
void emit_outputs(const std::filesystem::path& dir, const ScenarioReport& report,
                  const SystemOutcome* outcome = nullptr, std::size_t window_start = 0);

/// The summary document written by emit_outputs, and its reader.
std::string summary_json(const ScenarioReport& report);
ScenarioReport read_summary(const std::filesystem::path& path);

/// Cross-scenario charts: cost and demand deltas, capacity and generation
/// mixes with deltas against the reference.
void emit_comparison(const std::filesystem::path& dir, const std::vector<ScenarioReport>& reports);

}  // namespace hdvgrid
