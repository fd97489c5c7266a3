#include <doctest.h>

#include <numeric>

#include "hdvgrid/config_io.hpp"
#include "hdvgrid/lp.hpp"
#include "hdvgrid/model_build.hpp"
#include "support.hpp"

using namespace hdvgrid;
using testsupport::data_dir;

namespace {

CheckedScenario checked(const TechnologyCatalog& cat, std::size_t horizon) {
  ScenarioConfig cfg;
  cfg.horizon = horizon;
  return validate_scenario(cfg, cat, std::nullopt, std::nullopt);
}

const SynthResult& bundled() {
  static const SynthResult s = synthesize(load_synth_config(data_dir() / "synth.yaml"));
  return s;
}

}  // namespace

TEST_CASE("dispatch toy: merit order and scarcity prices") {
  for (double load : {50.0, 150.0, 250.0}) {
    const ScenarioModel m = build_core(checked(testsupport::dispatch_toy(load), 24));
    const SolutionView sol = solve(m.ir);
    REQUIRE(sol.optimal());
    const double expected = load <= 100.0 ? 20.0 : load <= 200.0 ? 50.0 : 3000.0;
    for (std::size_t h = 0; h < 24; ++h) CHECK(sol.dual("bal:N:" + std::to_string(h)) == doctest::Approx(expected));
    CHECK(sol.value("shed:N:5") == doctest::Approx(std::max(0.0, load - 200.0)));
    const double base = std::min(load, 100.0), peak = std::min(std::max(load - 100.0, 0.0), 100.0);
    CHECK(sol.objective == doctest::Approx(24.0 * (20.0 * base + 50.0 * peak + 3000.0 * (load - base - peak))));
  }
}

TEST_CASE("a fixed demand raises the balance right-hand side") {
  ScenarioModel m = build_core(checked(testsupport::dispatch_toy(60.0), 24));
  add_fixed_demand(m, std::vector<double>(24, 70.0));
  const SolutionView sol = solve(m.ir);
  REQUIRE(sol.optimal());
  CHECK(sol.dual("bal:N:0") == doctest::Approx(50.0));
}

TEST_CASE("cyclic storage shifts energy from cheap to expensive hours") {
  TechnologyCatalog cat = testsupport::dispatch_toy(0.0, 24);
  for (std::size_t h = 0; h < 24; ++h) cat.series["load"].values[h] = h < 12 ? 60.0 : 140.0;
  const SolutionView without = solve(build_core(checked(cat, 24)).ir);
  StorageTech bat;
  bat.name = "bat";
  bat.fixed = true;
  bat.energy_max = 200.0;
  bat.power_max = 30.0;
  bat.charge_efficiency = 0.9;
  bat.discharge_efficiency = 0.9;
  cat.storages.push_back(bat);
  const ScenarioModel m = build_core(checked(cat, 24));
  const SolutionView sol = solve(m.ir);
  REQUIRE(sol.optimal());
  CHECK(sol.objective < without.objective);
  double in = 0.0, out = 0.0;
  for (std::size_t h = 0; h < 24; ++h) {
    in += sol.value("sto_ch:N:bat:" + std::to_string(h)) * 0.9;
    out += sol.value("sto_dis:N:bat:" + std::to_string(h)) / 0.9;
  }
  CHECK(in == doctest::Approx(out));
  CHECK(in == doctest::Approx(200.0));
  CHECK(sol.value("sto_lvl:N:bat:11") == doctest::Approx(200.0));
  CHECK(sol.value("sto_lvl:N:bat:23") == doctest::Approx(0.0));
}

TEST_CASE("island scenarios have no exchange") {
  const TechnologyCatalog cat = load_catalog(data_dir() / "toy" / "catalog.yaml");
  ScenarioConfig cfg;
  cfg.horizon = 24;
  cfg.island = true;
  const ScenarioModel m = build_core(validate_scenario(cfg, cat, std::nullopt, std::nullopt));
  REQUIRE_FALSE(m.flows.empty());
  for (const auto& f : m.flows) {
    for (int v : f.forward) CHECK(m.ir.variable(v).upper == 0.0);
    for (int v : f.backward) CHECK(m.ir.variable(v).upper == 0.0);
  }
  CHECK(m.year_fraction == doctest::Approx(24.0 / 8760.0));
  CHECK(m.nodes[m.focal] == "DE");
}

TEST_CASE("battery fleet block tags and V2G switch") {
  const SynthResult& s = bundled();
  const FleetSpec fleet = attach_profiles(load_fleet(data_dir() / "fleet_bev.yaml"), s.starts.profiles);
  ExpandOptions eo;
  eo.horizon = 48;
  const FleetSeries series = expand_to_horizon(s.starts.profiles, fleet, eo);
  const TechnologyCatalog cat = load_catalog(data_dir() / "toy" / "catalog.yaml");
  for (bool v2g : {false, true}) {
    ScenarioModel m = build_core(checked(cat, 48));
    const std::size_t before = m.ir.num_variables();
    add_bev_block(m, series, fleet, v2g);
    REQUIRE(m.fleet.size() == series.profiles.size());
    const std::string id = m.fleet[0].id;
    CHECK(m.ir.find_variable("g2b:" + id + ":0") >= 0);
    CHECK(m.ir.find_variable("soc:" + id + ":47") >= 0);
    CHECK(m.ir.find_constraint("soc_bal:" + id + ":0") >= 0);
    CHECK((m.ir.find_variable("v2g:" + id + ":0") >= 0) == v2g);
    CHECK(m.fleet[0].v2g.empty() == !v2g);
    CHECK(m.ir.num_variables() - before == series.profiles.size() * 48 * (v2g ? 3 : 2));
    const Variable& soc = m.ir.variable(m.fleet[0].soc[0]);
    CHECK(soc.upper == doctest::Approx(series.profiles[0].vehicles * fleet.battery_capacity_kwh / 1000.0));
  }
}

TEST_CASE("hydrogen block meets demand through electrolysis") {
  const FuelChainSpec chain = load_fuel_chain(data_dir() / "fuel_chain.yaml");
  FuelDemand d;
  d.h2_kg.assign(24, 1000.0);
  d.diesel_l.assign(24, 0.0);
  d.km.assign(24, 0.0);
  for (H2Mode mode : {H2Mode::Central, H2Mode::Onsite}) {
    ScenarioModel m = build_core(checked(testsupport::dispatch_toy(50.0), 24));
    add_h2_block(m, d, chain, mode);
    const SolutionView sol = solve(m.ir);
    REQUIRE(sol.optimal());
    double h2 = 0.0;
    for (const auto& e : m.electrolyzers)
      for (int v : e.draw) h2 += sol.x[static_cast<std::size_t>(v)] * e.efficiency;
    CHECK(h2 == doctest::Approx(24.0 * 1000.0 * chain.h2_energy_kwh_per_kg / 1000.0));
    CHECK(m.transport_factor == (mode == H2Mode::Central ? doctest::Approx(chain.transport_kwh_per_kg /
                                                                            chain.h2_energy_kwh_per_kg)
                                                          : doctest::Approx(0.0)));
  }
  ScenarioModel bad = build_core(checked(testsupport::dispatch_toy(50.0), 24));
  d.h2_kg.resize(10);
  CHECK_THROWS_AS(add_h2_block(bad, d, chain, H2Mode::Central), ValidationError);
}

TEST_CASE("sensitivities override the scenario configuration") {
  ScenarioConfig cfg;
  Sensitivities s;
  s.island = true;
  s.depot_scale = 0.5;
  s.wind_cap_onshore = 1000.0;
  const ScenarioConfig out = apply_sensitivities(cfg, s);
  CHECK(out.island);
  CHECK(out.depot_scale == 0.5);
  CHECK(out.away_scale == cfg.away_scale);
  CHECK(out.wind_cap_onshore.value() == 1000.0);
  CHECK_FALSE(out.wind_cap_offshore.has_value());
}
