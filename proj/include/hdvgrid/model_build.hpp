#pragma once

// Scenario LP assembly: power-sector core plus at most one HDV block.
//
// The objective is the cost of the modelled horizon: annualized capacity
// costs are pro-rated by H / 8760, so balance duals are EUR/MWh prices.
// Variable and constraint tags:
//   bal:<node>:<h>                  energy balance (dual = price)
//   cap:<node>:<tech>               generation capacity, expandable node only
//   gen:<node>:<tech>:<h>           dispatch
//   sto_e|sto_pin|sto_pout:<node>:<tech>, sto_ch|sto_dis|sto_lvl:<node>:<tech>:<h>
//   flow:<from>:<to>:<h>            one variable per direction
//   shed:<node>:<h>
//   g2b|v2g|soc:<profile>:<h>       battery fleets
//   ely_cap:<tech>, ely:<tech>:<h>, h2_sto, h2_lvl:<h>
//   syn_cap, syn:<h>, liq_sto, liq_lvl:<h>

#include <optional>
#include <string>
#include <vector>

#include "hdvgrid/charging.hpp"
#include "hdvgrid/core.hpp"
#include "hdvgrid/model_ir.hpp"
#include "hdvgrid/profiles.hpp"

namespace hdvgrid {

struct GenVars {
  std::size_t node = 0;
  std::string tech;
  int cap = -1;           // -1 when the capacity is fixed
  double fixed_cap = 0.0;
  std::vector<int> gen;
};

struct StorageVars {
  std::size_t node = 0;
  std::string tech;
  int energy_cap = -1, charge_cap = -1, discharge_cap = -1;
  double fixed_energy = 0.0, fixed_charge = 0.0, fixed_discharge = 0.0;
  std::vector<int> charge, discharge, level;
};

struct FlowVars {
  std::size_t from = 0, to = 0;
  std::vector<int> forward, backward;
};

struct FleetVars {
  std::string id;
  std::vector<int> g2b, v2g, soc;  // v2g empty without vehicle-to-grid
};

struct ElectrolyzerVars {
  std::string tech;
  double efficiency = 1.0;
  int cap = -1;
  std::vector<int> draw;
};

enum class H2Mode { Central, Onsite };

struct ScenarioModel {
  ModelIR ir;
  ScenarioKind kind = ScenarioKind::REF;
  std::size_t horizon = 0;
  std::size_t focal = 0;  // expandable node
  std::vector<std::string> nodes;
  std::vector<std::vector<int>> balance;  // [node][h]
  std::vector<std::vector<int>> shed;     // [node][h]
  std::vector<GenVars> generators;
  std::vector<StorageVars> storages;
  std::vector<FlowVars> flows;
  std::vector<FleetVars> fleet;
  std::vector<ElectrolyzerVars> electrolyzers;
  int h2_store_cap = -1, synthesis_cap = -1, liquid_store_cap = -1;
  std::vector<int> h2_level, synthesis, liquid_level;
  /// Exogenous HDV grid demand at the focal node (inflexible charging and
  /// catenary wheel energy), MW.
  std::vector<double> fixed_hdv_mw;
  /// Electricity per MWh of electrolyzer draw for liquefaction and transport.
  double transport_factor = 0.0;
  /// Horizon share of a year, H / 8760.
  double year_fraction = 0.0;
};

/// Balance, dispatch, capacity, storage, interconnector and shedding terms.
ScenarioModel build_core(const CheckedScenario& scenario);

/// Aggregated battery per profile with cyclic SoC. Grid draw and V2G enter
/// the focal balance.
void add_bev_block(ScenarioModel& m, const FleetSeries& series, const FleetSpec& fleet, bool v2g);
/// As the BEV block plus catenary: wheel energy under catenary is a fixed
/// demand and spare catenary power can charge the battery.
void add_ers_block(ScenarioModel& m, const FleetSeries& series, const FleetSpec& fleet, bool v2g);
/// Adds an exogenous demand series (MW) to the focal balance.
void add_fixed_demand(ScenarioModel& m, const std::vector<double>& mw);
void add_h2_block(ScenarioModel& m, const FuelDemand& demand, const FuelChainSpec& chain, H2Mode mode);
void add_ptl_block(ScenarioModel& m, const FuelDemand& demand, const FuelChainSpec& chain);

/// Demand-side inputs for the HDV block of a scenario.
struct HdvInputs {
  std::optional<FleetSeries> fleet_series;
  std::optional<BalancedChargePlan> plan;
  std::optional<FuelDemand> fuel;
};

/// Core plus the block selected by the scenario kind.
ScenarioModel build_scenario_model(const CheckedScenario& scenario, const HdvInputs& hdv);

/// Sensitivity switches that override a scenario configuration.
struct Sensitivities {
  std::optional<bool> island;
  std::optional<double> wind_cap_onshore;
  std::optional<double> wind_cap_offshore;
  std::optional<double> depot_scale;
  std::optional<double> away_scale;
};

ScenarioConfig apply_sensitivities(ScenarioConfig cfg, const Sensitivities& s);

}  // namespace hdvgrid
