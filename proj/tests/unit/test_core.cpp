#include <doctest.h>

#include "hdvgrid/config_io.hpp"
#include "hdvgrid/core.hpp"
#include "support.hpp"

using namespace hdvgrid;
using testsupport::data_dir;

TEST_CASE("scenario kinds round-trip through their names") {
  for (ScenarioKind k : kAllScenarios) CHECK(scenario_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(scenario_kind_from_string("BEV"), ValidationError);
  CHECK(uses_battery_fleet(ScenarioKind::ERS_INFLEX));
  CHECK(uses_catenary(ScenarioKind::ERS_FLEX_V2G));
  CHECK_FALSE(uses_catenary(ScenarioKind::BEV_FLEX));
  CHECK(uses_fuel_chain(ScenarioKind::ICEV_PTL));
  CHECK(is_inflexible(ScenarioKind::BEV_INFLEX));
  CHECK_FALSE(is_inflexible(ScenarioKind::BEV_FLEX));
  CHECK(allows_v2g(ScenarioKind::ERS_FLEX_V2G));
  CHECK_FALSE(allows_v2g(ScenarioKind::ERS_FLEX));
}

TEST_CASE("marginal cost adds fuel over efficiency and the carbon price") {
  GenerationTech g;
  g.variable_cost = 2.0;
  g.fuel_cost = 30.0;
  g.efficiency = 0.6;
  g.emission_factor = 0.35;
  CHECK(g.marginal_cost(100.0) == doctest::Approx(2.0 + 50.0 + 35.0));
}

TEST_CASE("time series helpers") {
  TimeSeries ts;
  ts.values = {1.0, 2.0, 3.0, 4.0};
  CHECK(ts.sum() == 10.0);
  CHECK(ts.head(2).values == std::vector<double>{1.0, 2.0});
  CHECK(ts.length() == 4);
}

TEST_CASE("validation rejects broken technologies") {
  GenerationTech g;
  g.name = "x";
  g.efficiency = 0.0;
  CHECK_THROWS_AS(validate(g), ValidationError);
  g.efficiency = 0.5;
  g.capacity_min = 10.0;
  g.capacity_max = 5.0;
  CHECK_THROWS_AS(validate(g), ValidationError);

  StorageTech s;
  s.name = "s";
  s.charge_efficiency = 1.2;
  CHECK_THROWS_AS(validate(s), ValidationError);

  ScenarioConfig cfg;
  cfg.horizon = 0;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
  cfg.horizon = 24;
  cfg.depot_scale = 0.0;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
}

TEST_CASE("catalog validation needs exactly one expandable node and defined series") {
  TechnologyCatalog cat = testsupport::dispatch_toy(100.0);
  CHECK_NOTHROW(validate(cat));
  cat.nodes[0].expandable = false;
  CHECK_THROWS_AS(validate(cat), ValidationError);
  cat = testsupport::dispatch_toy(100.0);
  cat.nodes[0].load = "missing";
  CHECK_THROWS_AS(validate(cat), ValidationError);
  cat = testsupport::dispatch_toy(100.0);
  cat.generators.push_back(cat.generators[0]);
  CHECK_THROWS_AS(validate(cat), ValidationError);
}

TEST_CASE("validate_scenario checks the fleet against the scenario kind") {
  const TechnologyCatalog cat = testsupport::dispatch_toy(100.0, 48);
  ScenarioConfig cfg;
  cfg.horizon = 48;
  CHECK_NOTHROW(validate_scenario(cfg, cat, std::nullopt, std::nullopt));
  CHECK_THROWS_AS(validate_scenario(cfg, cat, FleetSpec::default_bev(), std::nullopt), ValidationError);
  cfg.kind = ScenarioKind::BEV_FLEX;
  CHECK_THROWS_AS(validate_scenario(cfg, cat, std::nullopt, std::nullopt), ValidationError);
  CHECK_THROWS_AS(validate_scenario(cfg, cat, FleetSpec::default_ers(), std::nullopt), ValidationError);
  cfg.kind = ScenarioKind::FCEV_CENTRAL;
  CHECK_THROWS_AS(validate_scenario(cfg, cat, std::nullopt, std::nullopt), ValidationError);
  cfg.kind = ScenarioKind::REF;
  cfg.horizon = 72;
  CHECK_THROWS_AS(validate_scenario(cfg, cat, std::nullopt, std::nullopt), ValidationError);
}

TEST_CASE("validated series are cut to the horizon") {
  const TechnologyCatalog cat = testsupport::dispatch_toy(100.0, 96);
  ScenarioConfig cfg;
  cfg.horizon = 48;
  const CheckedScenario sc = validate_scenario(cfg, cat, std::nullopt, std::nullopt);
  CHECK(sc.catalog.series.at("load").length() == 48);
}

TEST_CASE("island mode zeroes every interconnector") {
  TechnologyCatalog cat = load_catalog(data_dir() / "toy" / "catalog.yaml");
  REQUIRE_FALSE(cat.interconnectors.empty());
  const TechnologyCatalog isl = make_island(cat);
  for (const auto& ic : isl.interconnectors) {
    CHECK(ic.ntc_forward == 0.0);
    CHECK(ic.ntc_backward == 0.0);
  }
}

TEST_CASE("availability scalars act on depot and away ratings separately") {
  CHECK(scale_availability(200.0, ConnectionKind::Depot, 0.5, 4.0) == 100.0);
  CHECK(scale_availability(200.0, ConnectionKind::Stop, 0.5, 4.0) == 800.0);
  CHECK(scale_availability(500.0, ConnectionKind::Break, 0.5, 2.0) == 1000.0);
  const auto v = scale_availability(std::vector<double>{0.0, 100.0}, ConnectionKind::Depot, 0.25, 1.0);
  CHECK(v == std::vector<double>{0.0, 25.0});
  const FleetSpec f = scale_availability(FleetSpec::default_bev(), 0.5, 2.0);
  const FleetSpec base = FleetSpec::default_bev();
  CHECK(f.depot_rating_kw == doctest::Approx(base.depot_rating_kw * 0.5));
  CHECK(f.depot_rating_effective_kw == doctest::Approx(base.depot_rating_effective_kw * 0.5));
  CHECK(f.stop_rating_kw == doctest::Approx(base.stop_rating_kw * 2.0));
  CHECK(f.break_rating_effective_kw == doctest::Approx(base.break_rating_effective_kw * 2.0));
}

TEST_CASE("default fleets carry the vehicle table values") {
  const FleetSpec bev = FleetSpec::default_bev();
  CHECK(bev.battery_capacity_kwh == 655.0);
  CHECK(bev.range_km * bev.consumption_battery_kwh_per_km == doctest::Approx(655.0));
  CHECK_FALSE(bev.has_catenary());
  const FleetSpec ers = FleetSpec::default_ers();
  CHECK(ers.has_catenary());
  CHECK(ers.battery_capacity_kwh == 181.0);
  CHECK(ers.consumption_catenary_kwh_per_km == 1.42);
  CHECK(ers.consumption_battery_kwh_per_km == 1.25);
}
