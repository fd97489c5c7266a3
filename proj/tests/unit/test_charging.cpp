#include <doctest.h>

#include <numeric>

#include "hdvgrid/charging.hpp"
#include "hdvgrid/config_io.hpp"
#include "support.hpp"

using namespace hdvgrid;
using testsupport::data_dir;
using testsupport::TempDir;

namespace {

struct Single {
  FleetSpec fleet;
  FleetSeries series;
};

Single single_vehicle(double daily_km, double idle_h, double break_h, int hours, int start) {
  StylizedProfile sp;
  sp.operating_hours = hours;
  sp.avg_daily_km = daily_km;
  sp.avg_journey_h = daily_km / 79.0;
  sp.avg_idle_h = idle_h;
  sp.avg_break_h = break_h;
  sp.vehicles = 1.0;
  DrivingProfile dp;
  dp.id = "one";
  dp.operating_hours = hours;
  dp.start_hour = start;
  dp.weight = 1.0;
  dp.vehicles = 1.0;
  dp.day = layout_day(sp, start);
  Single s;
  s.fleet = load_fleet(data_dir() / "fleet_bev.yaml");
  s.fleet.profile_vehicles = {{"one", 1.0}};
  s.fleet.fleet_size = 1.0;
  ExpandOptions opts;
  opts.horizon = 168;
  opts.scale_to_working_days = false;
  s.series = expand_to_horizon({dp}, s.fleet, opts);
  return s;
}

}  // namespace

TEST_CASE("balanced plan replaces exactly the driving energy") {
  const Single s = single_vehicle(399.0, 2.43, 0.75, 8, 7);
  const BalancedChargePlan plan = balanced_charging(s.series, s.fleet);
  REQUIRE(plan.profiles.size() == 1);
  const ProfilePlan& p = plan.profiles[0];
  const double inflow = std::accumulate(p.battery_kw.begin(), p.battery_kw.end(), 0.0);
  CHECK(inflow == doctest::Approx(5 * 399.0 * 1.31));
  double drawn = 0.0;
  for (double g : p.grid_kw) drawn += g * s.fleet.charging_efficiency;
  CHECK(drawn == doctest::Approx(inflow));
  CHECK(p.initial_soc_kwh == doctest::Approx(p.soc_kwh.back()));
  for (double soc : p.soc_kwh) {
    CHECK(soc >= -1e-9);
    CHECK(soc <= p.capacity_kwh + 1e-9);
  }
  CHECK(verify_energy_balance(plan, s.series, s.fleet).ok());
  const auto total = plan.total_grid_kw();
  CHECK(std::accumulate(total.begin(), total.end(), 0.0) ==
        doctest::Approx(std::accumulate(p.grid_kw.begin(), p.grid_kw.end(), 0.0)));
}

TEST_CASE("connection windows follow the day layout") {
  const Single s = single_vehicle(399.0, 2.43, 0.75, 8, 7);
  const auto windows = connection_windows(s.series.profiles[0], s.fleet);
  REQUIRE_FALSE(windows.empty());
  bool has_break = false, has_stop = false;
  for (const auto& w : windows) {
    CHECK(w.length() == w.rating_kw.size());
    CHECK(w.end > w.start);
    for (double r : w.rating_kw) CHECK(r > 0.0);
    has_break |= w.kind == WindowKind::Break;
    has_stop |= w.kind == WindowKind::Stop;
  }
  CHECK(has_break);
  CHECK(has_stop);
  // The first window spans midnight to the departure at 7.
  CHECK(windows.front().kind == WindowKind::Depot);
  CHECK(windows.front().start == 0);
  CHECK(windows.front().end == 7);
  CHECK(to_string(WindowKind::Catenary) == "catenary");
}

TEST_CASE("the charging plan fills the battery before each departure") {
  const Single s = single_vehicle(300.0, 1.0, 0.0, 6, 8);
  const BalancedChargePlan plan = balanced_charging(s.series, s.fleet);
  const ProfilePlan& p = plan.profiles[0];
  for (std::size_t d = 1; d < 5; ++d) CHECK(p.soc_kwh[d * 24 + 7] == doctest::Approx(p.capacity_kwh));
}

TEST_CASE("verification flags a tampered plan") {
  const Single s = single_vehicle(399.0, 2.43, 0.75, 8, 7);
  BalancedChargePlan plan = balanced_charging(s.series, s.fleet);
  plan.profiles[0].grid_kw[3] += 50.0;
  CHECK_FALSE(verify_energy_balance(plan, s.series, s.fleet).ok());
}

TEST_CASE("driving that empties the battery is rejected") {
  const Single s = single_vehicle(800.0, 0.0, 0.0, 11, 6);
  try {
    balanced_charging(s.series, s.fleet);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("one") != std::string::npos);
  }
}

TEST_CASE("plan file has one row per hour and profile") {
  const Single s = single_vehicle(399.0, 2.43, 0.75, 8, 7);
  const BalancedChargePlan plan = balanced_charging(s.series, s.fleet);
  TempDir dir("plan");
  write_plan(dir / "plan.csv", plan);
  const std::string text = testsupport::slurp(dir / "plan.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 168);
  CHECK(text.rfind("hour,profile_id,grid_draw_MW,soc_MWh\n", 0) == 0);
}
