#pragma once

// Domain types shared by every module: technology catalog, nodes, fleet and
// fuel-chain specifications, scenario configuration.
//
// Units are fixed repository-wide: MW, MWh, EUR, hours, tCO2. Vehicle-level
// figures (kW, kWh) stay in kW/kWh inside FleetSpec and are converted to
// MW/MWh when fleets are aggregated.

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hdvgrid {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kHoursPerYear = 8760.0;

/// Malformed input: unreadable file, syntax error, missing or mistyped field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string file, int line, std::string field, const std::string& what);

  const std::string& file() const noexcept { return file_; }
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string file_;
  int line_;
  std::string field_;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeSeries {
  std::vector<double> values;
  double resolution_h = 1.0;

  std::size_t length() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double sum() const noexcept;
  TimeSeries head(std::size_t n) const;
};

enum class GenKind { VariableRenewable, Dispatchable };

std::string_view to_string(GenKind k);
GenKind gen_kind_from_string(std::string_view s);

struct GenerationTech {
  std::string name;
  GenKind kind = GenKind::Dispatchable;
  /// Free-form grouping used by sensitivities and reports
  /// ("solar", "wind_onshore", "wind_offshore", "gas", ...).
  std::string category;
  bool renewable = false;
  double investment_cost = 0.0;  // EUR/MW-yr, annualized
  double fixed_om = 0.0;         // EUR/MW-yr
  double variable_cost = 0.0;    // EUR/MWh-el
  double fuel_cost = 0.0;        // EUR/MWh-thermal
  double efficiency = 1.0;
  double emission_factor = 0.0;  // tCO2/MWh-el
  double capacity_min = 0.0;     // MW
  double capacity_max = kInf;    // MW
  std::string availability;      // series name, variable renewables only

  /// Operating cost per MWh-el, including fuel and the CO2 price.
  double marginal_cost(double co2_price) const noexcept {
    return variable_cost + fuel_cost / efficiency + emission_factor * co2_price;
  }
};

struct StorageTech {
  std::string name;
  double energy_cost = 0.0;          // EUR/MWh-yr
  double charge_power_cost = 0.0;    // EUR/MW-yr
  double discharge_power_cost = 0.0; // EUR/MW-yr
  double charge_efficiency = 1.0;
  double discharge_efficiency = 1.0;
  double self_discharge = 0.0;       // fraction per hour
  double energy_min = 0.0;
  double energy_max = kInf;
  double power_min = 0.0;
  double power_max = kInf;
  /// Capacity is not optimizable; energy_max / power_max are the installed sizes.
  bool fixed = false;
};

struct Node {
  std::string name;
  std::string load;  // series name
  bool expandable = false;
  /// Installed capacity for non-expandable nodes. Generators and storage power
  /// use the technology name; storage energy uses "<name>.energy".
  std::map<std::string, double> fixed_capacity;
};

struct Interconnector {
  std::string from;
  std::string to;
  double ntc_forward = 0.0;   // MW, from -> to
  double ntc_backward = 0.0;  // MW, to -> from
  double loss = 0.0;
};

struct TechnologyCatalog {
  std::vector<GenerationTech> generators;
  std::vector<StorageTech> storages;
  std::vector<Node> nodes;
  std::vector<Interconnector> interconnectors;
  std::map<std::string, TimeSeries> series;

  const GenerationTech* find_generator(std::string_view name) const;
  const StorageTech* find_storage(std::string_view name) const;
  const Node* find_node(std::string_view name) const;
  std::size_t expandable_node() const;
  /// Shortest series length; the longest horizon the catalog supports.
  std::size_t max_horizon() const;
};

struct FleetSpec {
  std::string name;
  /// Vehicle counts per synthesized profile id; filled by profile synthesis.
  std::map<std::string, double> profile_vehicles;
  double fleet_size = 0.0;
  double range_km = 0.0;
  double battery_capacity_kwh = 0.0;  // usable
  double depot_rating_kw = 0.0;       // nominal, grid side
  double depot_rating_effective_kw = 0.0;
  double stop_rating_kw = 0.0;
  double stop_rating_effective_kw = 0.0;
  double break_rating_kw = 0.0;
  double break_rating_effective_kw = 0.0;
  double catenary_rating_kw = 0.0;
  double charging_efficiency = 1.0;
  double discharge_efficiency = 1.0;
  double consumption_catenary_kwh_per_km = 0.0;
  double consumption_battery_kwh_per_km = 0.0;
  bool v2g_allowed = true;

  bool has_catenary() const noexcept { return catenary_rating_kw > 0.0; }

  /// Table values for a long-haul battery truck.
  static FleetSpec default_bev();
  /// Table values for a catenary hybrid truck.
  static FleetSpec default_ers();
};

struct ElectrolyzerTech {
  std::string name;
  double investment_cost = 0.0;  // EUR/MW-el-yr
  double efficiency = 1.0;       // MWh-H2 (LHV) per MWh-el
};

struct FuelChainSpec {
  std::vector<ElectrolyzerTech> electrolyzers;
  double h2_storage_cost = 0.0;            // EUR/MWh-yr
  double h2_storage_max = kInf;            // MWh, central mode
  double transport_kwh_per_kg = 0.0;       // liquefaction + transport, central H2 only
  double synthesis_efficiency = 1.0;       // MWh-liquid per MWh-H2
  double synthesis_investment_cost = 0.0;  // EUR/MW-H2-input-yr
  double liquid_storage_cost = 0.0;        // EUR/MWh-yr
  double h2_energy_kwh_per_kg = 33.33;
  double diesel_energy_kwh_per_l = 9.97;
  double h2_kg_per_100km = 6.8;
  double diesel_l_per_100km = 27.1;
  double onsite_buffer_hours = 24.0;

  static FuelChainSpec defaults();
};

enum class ScenarioKind {
  REF,
  BEV_FLEX,
  BEV_FLEX_V2G,
  BEV_INFLEX,
  ERS_FLEX,
  ERS_FLEX_V2G,
  ERS_INFLEX,
  FCEV_CENTRAL,
  FCEV_ONSITE,
  ICEV_PTL,
};

inline constexpr ScenarioKind kAllScenarios[] = {
    ScenarioKind::REF,          ScenarioKind::BEV_FLEX,     ScenarioKind::BEV_FLEX_V2G,
    ScenarioKind::BEV_INFLEX,   ScenarioKind::ERS_FLEX,     ScenarioKind::ERS_FLEX_V2G,
    ScenarioKind::ERS_INFLEX,   ScenarioKind::FCEV_CENTRAL, ScenarioKind::FCEV_ONSITE,
    ScenarioKind::ICEV_PTL,
};

std::string_view to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(std::string_view s);

bool uses_battery_fleet(ScenarioKind k) noexcept;  // BEV_* and ERS_*
bool uses_catenary(ScenarioKind k) noexcept;       // ERS_*
bool uses_fuel_chain(ScenarioKind k) noexcept;     // FCEV_*, ICEV_PTL
bool is_inflexible(ScenarioKind k) noexcept;
bool allows_v2g(ScenarioKind k) noexcept;

struct SolverOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  long max_iterations = 2'000'000;
  bool bland_fallback = true;
  bool scaling = true;
  int refactor_interval = 100;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::REF;
  std::size_t horizon = 168;
  bool island = false;
  double co2_price = 100.0;
  std::optional<double> wind_cap_onshore;   // MW
  std::optional<double> wind_cap_offshore;  // MW
  double depot_scale = 1.0;
  double away_scale = 1.0;
  double voll = 3000.0;
  /// Weekday of hour 0, 0 = Monday.
  int anchor_weekday = 0;
  SolverOptions solver;
};

/// A scenario whose pieces have been checked against each other. Only
/// validate_scenario constructs one.
struct CheckedScenario {
  ScenarioConfig config;
  TechnologyCatalog catalog;  // series truncated to the horizon, island applied
  std::optional<FleetSpec> fleet;
  std::optional<FuelChainSpec> chain;
};

void validate(const GenerationTech& g);
void validate(const StorageTech& s);
void validate(const Interconnector& ic);
void validate(const FleetSpec& f);
void validate(const FuelChainSpec& c);
void validate(const ScenarioConfig& cfg);
/// Catalog-internal consistency: references resolve, one expandable node.
void validate(const TechnologyCatalog& cat);

/// Returns the catalog with every interconnector NTC set to zero.
TechnologyCatalog make_island(TechnologyCatalog cat);

CheckedScenario validate_scenario(const ScenarioConfig& cfg, const TechnologyCatalog& catalog,
                                  const std::optional<FleetSpec>& fleet,
                                  const std::optional<FuelChainSpec>& chain);

enum class ConnectionKind { Depot, Stop, Break };

/// Multiplies connection ratings by the sensitivity scalars: depot-tagged
/// ratings by `depot_scale`, stop and break ratings by `away_scale`.
double scale_availability(double rating_kw, ConnectionKind kind, double depot_scale,
                          double away_scale);
std::vector<double> scale_availability(const std::vector<double>& series_kw, ConnectionKind kind,
                                       double depot_scale, double away_scale);
/// Same scaling applied to a fleet's station ratings (nominal and effective).
FleetSpec scale_availability(FleetSpec fleet, double depot_scale, double away_scale);

}  // namespace hdvgrid
