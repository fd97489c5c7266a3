#include <doctest.h>

#include <cstdlib>

#include "hdvgrid/config_io.hpp"
#include "hdvgrid/runner.hpp"
#include "support.hpp"

using namespace hdvgrid;
using testsupport::data_dir;
using testsupport::spit;
using testsupport::TempDir;

TEST_CASE("toy catalog loads with series resolved next to it") {
  const TechnologyCatalog cat = load_catalog(data_dir() / "toy" / "catalog.yaml");
  CHECK(cat.generators.size() == 10);
  CHECK(cat.storages.size() == 3);
  CHECK(cat.nodes.size() == 2);
  CHECK(cat.interconnectors.size() == 1);
  CHECK(cat.max_horizon() >= 168);
  CHECK(cat.nodes[cat.expandable_node()].name == "DE");
  const GenerationTech* pv = cat.find_generator("solar_pv");
  REQUIRE(pv);
  CHECK(pv->kind == GenKind::VariableRenewable);
  CHECK(pv->availability == "solar");
  const StorageTech* ph = cat.find_storage("pumped_hydro");
  REQUIRE(ph);
  CHECK(ph->fixed);
  CHECK(cat.find_generator("nothing") == nullptr);
}

TEST_CASE("fleet and fuel chain files") {
  const FleetSpec bev = load_fleet(data_dir() / "fleet_bev.yaml");
  CHECK(bev.battery_capacity_kwh == 655.0);
  CHECK(bev.break_rating_kw == 500.0);
  const FleetSpec ers = load_fleet(data_dir() / "fleet_ers.yaml");
  CHECK(ers.has_catenary());
  const FuelChainSpec chain = load_fuel_chain(data_dir() / "fuel_chain.yaml");
  CHECK(chain.electrolyzers.size() == 2);
  CHECK(chain.h2_kg_per_100km == 6.8);
  CHECK(chain.diesel_l_per_100km == 27.1);
}

TEST_CASE("config errors carry file, line and field") {
  TempDir dir("cfg");
  spit(dir / "bad.yaml", "name: BEV\nrange_km: far\n");
  try {
    load_fleet(dir / "bad.yaml");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.field() == "range_km");
    CHECK(e.file().find("bad.yaml") != std::string::npos);
  }
  spit(dir / "syntax.yaml", "a: [1, 2\n");
  CHECK_THROWS_AS(load_fleet(dir / "syntax.yaml"), ConfigError);
  CHECK_THROWS_AS(load_catalog(dir / "absent.yaml"), ConfigError);
}

TEST_CASE("series files round-trip") {
  TempDir dir("series");
  const std::vector<double> v{0.0, 1.5, 1e-17, 123456789.123, -2.25};
  write_series(dir / "s.csv", "value", v);
  const TimeSeries ts = load_series(dir / "s.csv");
  CHECK(ts.values == v);
  spit(dir / "bad.csv", "value\n1\nx\n");
  CHECK_THROWS_AS(load_series(dir / "bad.csv"), ConfigError);
}

TEST_CASE("number formatting is shortest round-trip") {
  for (double v : {0.1, 1.0 / 3.0, 6.02e23, -4.5e-9, 84.9}) CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(50.0) == "50");
}

TEST_CASE("scenario file") {
  TempDir dir("scenario");
  spit(dir / "s.yaml", "kind: ERS_FLEX\nhorizon: 48\nisland: true\nwind_cap_onshore: 100000\n");
  const ScenarioConfig cfg = load_scenario(dir / "s.yaml");
  CHECK(cfg.kind == ScenarioKind::ERS_FLEX);
  CHECK(cfg.horizon == 48);
  CHECK(cfg.island);
  CHECK(cfg.wind_cap_onshore.value() == 100000.0);
  CHECK_FALSE(cfg.wind_cap_offshore.has_value());
  spit(dir / "t.yaml", "kind: TRAM\n");
  CHECK_THROWS(load_scenario(dir / "t.yaml"));
}

TEST_CASE("manifests resolve paths and reject duplicates") {
  const RunManifest m = load_manifest(data_dir() / "manifests" / "ci.yaml");
  CHECK(m.scenarios.size() == 10);
  CHECK(m.scenarios.front() == ScenarioKind::REF);
  CHECK(m.horizon == 168);
  CHECK(std::filesystem::exists(m.catalog));
  CHECK(std::filesystem::exists(m.fleet_bev));

  TempDir dir("manifest");
  spit(dir / "dup.yaml", "catalog: c.yaml\nscenarios: [REF, BEV_FLEX, REF]\n");
  CHECK_THROWS_AS(load_manifest(dir / "dup.yaml"), ConfigError);
  spit(dir / "none.yaml", "catalog: c.yaml\n");
  CHECK_THROWS_AS(load_manifest(dir / "none.yaml"), ConfigError);
  spit(dir / "jobs.yaml", "catalog: c.yaml\nscenarios: [REF]\njobs: 0\n");
  CHECK_THROWS_AS(load_manifest(dir / "jobs.yaml"), ConfigError);
  spit(dir / "ok.yaml", "catalog: sub/c.yaml\nscenarios: [REF]\nout: results\n");
  const RunManifest ok = load_manifest(dir / "ok.yaml");
  CHECK(ok.catalog == dir.path() / "sub" / "c.yaml");
  CHECK(ok.out == dir.path() / "results");
}
