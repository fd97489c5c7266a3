#include <doctest.h>

#include "hdvgrid/charts.hpp"
#include "hdvgrid/lp.hpp"
#include "hdvgrid/model_build.hpp"
#include "hdvgrid/report.hpp"
#include "support.hpp"

using namespace hdvgrid;
using testsupport::slurp;
using testsupport::TempDir;

namespace {

SystemOutcome toy_outcome(double load) {
  ScenarioConfig cfg;
  cfg.horizon = 24;
  const CheckedScenario sc = validate_scenario(cfg, testsupport::dispatch_toy(load), std::nullopt, std::nullopt);
  const ScenarioModel m = build_core(sc);
  const SolutionView sol = solve(m.ir);
  REQUIRE(sol.optimal());
  return extract_outcome(sc, m, sol);
}

}  // namespace

TEST_CASE("average charging price, gross and netted") {
  const std::vector<double> price{10.0, 50.0, 100.0};
  const ChargingPrice p = average_charging_price(price, {2.0, 0.0, 1.0}, {0.0, 0.0, 1.0});
  REQUIRE(p.gross);
  CHECK(*p.gross == doctest::Approx((20.0 + 100.0) / 3.0));
  REQUIRE(p.netted);
  CHECK(*p.netted == doctest::Approx(10.0));
  const ChargingPrice none = average_charging_price(price, {0.0, 0.0, 0.0}, {});
  CHECK_FALSE(none.gross);
  CHECK_FALSE(none.netted);
  CHECK_THROWS_AS(average_charging_price(price, {1.0}, {}), ValidationError);
}

TEST_CASE("outcome and report of the dispatch toy") {
  const SystemOutcome o = toy_outcome(150.0);
  CHECK(o.horizon == 24);
  CHECK(o.focal == "N");
  for (double p : o.price) CHECK(p == doctest::Approx(50.0));
  CHECK(o.generation.at("base")[3] == doctest::Approx(100.0));
  CHECK(o.generation.at("peak")[3] == doctest::Approx(50.0));
  const ScenarioReport r = make_report(o);
  const double yearly = 24.0 * (100.0 * 20.0 + 50.0 * 50.0) * 8760.0 / 24.0;
  CHECK(r.metrics.at("total_cost_eur_yr") == doctest::Approx(yearly));
  CHECK(r.metrics.at("mean_price_eur_mwh") == doctest::Approx(50.0));
  CHECK(r.metrics.at("renewable_share") == 0.0);
  CHECK(r.metrics.at("shed_twh") == doctest::Approx(0.0));
  const auto em = emissions(o);
  for (const auto& [node, t] : em) CHECK(t >= 0.0);
}

TEST_CASE("reports difference against a reference of the same horizon") {
  const ScenarioReport a = make_report(toy_outcome(150.0));
  const ScenarioReport b = make_report(toy_outcome(120.0));
  const ScenarioReport d = diff_report(a, b);
  CHECK(d.deltas.at("total_cost_eur_yr") == doctest::Approx(30.0 * 50.0 * 8760.0));
  ScenarioReport other = b;
  other.horizon = 48;
  CHECK_THROWS_AS(diff_report(a, other), ValidationError);
}

TEST_CASE("summary documents round-trip") {
  ScenarioReport r = make_report(toy_outcome(150.0));
  r.scenario = "BEV_FLEX";
  r.vehicles = 12.5;
  r.deltas["total_cost_eur_yr"] = 1.25e9;
  TempDir dir("summary");
  emit_outputs(dir.path(), r);
  const ScenarioReport back = read_summary(dir / "summary.json");
  CHECK(back.scenario == r.scenario);
  CHECK(back.horizon == r.horizon);
  CHECK(back.vehicles == r.vehicles);
  CHECK(back.metrics == r.metrics);
  CHECK(back.deltas == r.deltas);
  CHECK(slurp(dir / "summary.json").find("dataset_targets") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "metrics.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "hourly.csv"));
  testsupport::spit(dir / "broken.json", "{\"scenario\": 3");
  CHECK_THROWS_AS(read_summary(dir / "broken.json"), ConfigError);
  CHECK_THROWS_AS(read_summary(dir / "absent.json"), ConfigError);
}

TEST_CASE("outputs with an outcome include hourly data and a chart") {
  const SystemOutcome o = toy_outcome(150.0);
  TempDir dir("hourly");
  emit_outputs(dir.path(), make_report(o), &o);
  const std::string hourly = slurp(dir / "hourly.csv");
  CHECK(std::count(hourly.begin(), hourly.end(), '\n') == 25);
  CHECK(hourly.rfind("hour,price_EUR_MWh,", 0) == 0);
  CHECK(slurp(dir / "timeseries.svg").find("<svg") != std::string::npos);
}

TEST_CASE("charts are deterministic") {
  TempDir dir("charts");
  const std::vector<std::string> labels{"a", "b", "c"};
  const std::vector<double> values{1.5, -2.0, 0.25};
  write_bar_chart(dir / "one.svg", "T", "u", labels, values);
  write_bar_chart(dir / "two.svg", "T", "u", labels, values);
  CHECK(slurp(dir / "one.svg") == slurp(dir / "two.svg"));
  const std::vector<Series> s{{"x", {1.0, 2.0, 3.0}}, {"y", {0.5, 0.5, 0.5}}};
  write_stacked_bars(dir / "s1.svg", "T", "u", labels, s);
  write_stacked_bars(dir / "s2.svg", "T", "u", labels, s);
  CHECK(slurp(dir / "s1.svg") == slurp(dir / "s2.svg"));
  write_time_panel(dir / "p.svg", "T", "u", s, {{"line", {3.0, 1.0, 2.0}}});
  CHECK(slurp(dir / "p.svg").find("</svg>") != std::string::npos);
}

TEST_CASE("comparison outputs cover every non-reference scenario") {
  ScenarioReport ref = make_report(toy_outcome(120.0));
  ref.scenario = "REF";
  ScenarioReport bev = diff_report(make_report(toy_outcome(150.0)), ref);
  bev.scenario = "BEV_FLEX";
  TempDir dir("comparison");
  emit_comparison(dir.path(), {ref, bev});
  for (const char* f : {"comparison.csv", "cost_delta.svg", "demand_delta.svg", "capacity.svg", "generation.svg"})
    CHECK(std::filesystem::exists(dir / f));
  CHECK(slurp(dir / "comparison.csv").find("BEV_FLEX,total_cost_eur_yr") != std::string::npos);
}

TEST_CASE("published targets are attached per scenario kind") {
  CHECK(dataset_targets(ScenarioKind::REF).at("mean_price_eur_mwh") == 84.9);
  CHECK(dataset_targets(ScenarioKind::ERS_FLEX).empty());
}
