#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hdvgrid/config_io.hpp"
#include "hdvgrid/profiles.hpp"
#include "support.hpp"

using namespace hdvgrid;
using testsupport::data_dir;
using testsupport::TempDir;

namespace {

StylizedProfile stylized(int hours, double daily_km, double idle_h, double break_h) {
  StylizedProfile p;
  p.operating_hours = hours;
  p.avg_daily_km = daily_km;
  p.avg_journey_h = daily_km / 79.0;
  p.avg_idle_h = idle_h;
  p.avg_break_h = break_h;
  p.vehicles = 10.0;
  p.motorway_share = 0.5;
  return p;
}

}  // namespace

TEST_CASE("mileage regression evaluates a power law") {
  const MileageRegression reg{21180.0, 0.2979, 0.0};
  CHECK(annual_mileage(reg, 100.0) == doctest::Approx(21180.0 * std::pow(100.0, 0.2979)));
  CHECK(annual_mileage(reg, 100.0) == doctest::Approx(83500.0).epsilon(0.01));
  CHECK(annual_mileage({1000.0, 0.0, 5.0}, 42.0) == 1005.0);
}

TEST_CASE("daily operations for a short shuttle") {
  SynthParams params;
  params.idle_per_stop_h["shuttle"] = 0.1;
  TransportRelation r{98.0, "shuttle", 3.0, 0.7};
  const DailyOperations op = daily_operations(r, {196.0 * 240.0, 0.0, 0.0}, params);
  CHECK(op.daily_km == doctest::Approx(196.0));
  CHECK(op.trips == doctest::Approx(2.0));
  CHECK(op.journey_h == doctest::Approx(196.0 / 79.0));
  CHECK(op.idle_h == doctest::Approx(0.2));
  CHECK(op.break_h == 0.0);
  CHECK(op.operating_h == doctest::Approx(196.0 / 79.0 + 0.2));
  CHECK(op.bin == 3);

  TransportRelation longhaul{600.0, "other", 1.0, 0.9};
  const DailyOperations lh = daily_operations(longhaul, {500.0 * 240.0, 0.0, 0.0}, params);
  CHECK(lh.break_h == params.break_h);
  CHECK(lh.idle_h == doctest::Approx(500.0 / 600.0 * 0.5));
  CHECK(lh.bin == std::clamp(static_cast<int>(std::floor(lh.operating_h + 0.5)), 3, 10));

  CHECK_THROWS_AS(daily_operations({0.0, "x", 1.0, 0.0}, {1.0, 0.0, 0.0}, params), ValidationError);
}

TEST_CASE("stylized profiles average per bin and need relations") {
  SynthParams params;
  const MileageRegression reg{21180.0, 0.2979, 0.0};
  const std::vector<TransportRelation> rel{{20.0, "a", 2.0, 0.1}, {25.0, "a", 1.0, 0.2}, {400.0, "b", 4.0, 0.9}};
  const auto profiles = build_stylized_profiles(rel, reg, params);
  double vehicles = 0.0;
  for (const auto& p : profiles) {
    vehicles += p.vehicles;
    CHECK(p.avg_operating_h == doctest::Approx(p.avg_journey_h + p.avg_idle_h + p.avg_break_h));
  }
  CHECK(vehicles == 7.0);
  for (std::size_t i = 1; i < profiles.size(); ++i)
    CHECK(profiles[i - 1].operating_hours < profiles[i].operating_hours);
  try {
    build_stylized_profiles({}, reg, params);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("relations non-empty") != std::string::npos);
  }
}

TEST_CASE("day layout places break and stops inside the driving block") {
  const StylizedProfile p = stylized(8, 399.0, 2.43, 0.75);
  const DayLayout day = layout_day(p, 7);
  CHECK(day.daily_km() == doctest::Approx(399.0));
  CHECK(day.driving_hours() == 5);
  CHECK(day.state[6] == DayState::Depot);
  CHECK(day.state[7] == DayState::Driving);
  CHECK(day.state[14] != DayState::Depot);
  CHECK(day.state[15] == DayState::Depot);
  CHECK(std::count(day.state.begin(), day.state.end(), DayState::Break) == 1);
  CHECK(std::count(day.state.begin(), day.state.end(), DayState::Stop) == 2);
  CHECK_THROWS_AS(layout_day(p, 20), ValidationError);
  CHECK(to_string(DayState::Break) == "break");
}

TEST_CASE("start-time weights sum to one per stylized profile") {
  std::vector<StylizedProfile> s{stylized(3, 150.0, 0.4, 0.0), stylized(8, 400.0, 2.0, 0.75),
                                 stylized(9, 450.0, 3.0, 0.75)};
  const StartTimeFit fit = assign_start_times(s, default_target_curve());
  std::map<int, double> sums;
  double share = 0.0;
  for (const auto& p : fit.profiles) {
    CHECK(p.weight >= 0.0);
    sums[p.operating_hours] += p.weight;
    share += p.share;
  }
  for (const auto& [h, w] : sums) CHECK(w == doctest::Approx(1.0));
  CHECK(share == doctest::Approx(1.0));
  const double target = std::accumulate(fit.target_curve.begin(), fit.target_curve.end(), 0.0);
  const double fitted = std::accumulate(fit.fitted_curve.begin(), fit.fitted_curve.end(), 0.0);
  CHECK(fitted == doctest::Approx(target));
  const auto curve = default_target_curve();
  CHECK(std::accumulate(curve.begin(), curve.end(), 0.0) == doctest::Approx(1.0));
  CHECK(std::max_element(curve.begin(), curve.end()) - curve.begin() == 10);
}

TEST_CASE("weekends carry no driving and full depot connection") {
  const StylizedProfile sp = stylized(6, 300.0, 1.0, 0.75);
  DrivingProfile dp;
  dp.id = "p";
  dp.operating_hours = 6;
  dp.vehicles = 10.0;
  dp.weight = 1.0;
  dp.motorway_share = 0.5;
  dp.day = layout_day(sp, 6);
  const FleetSpec bev = FleetSpec::default_bev();
  ExpandOptions opts;
  opts.horizon = 168;
  opts.scale_to_working_days = false;
  const FleetSeries fs = expand_to_horizon({dp}, bev, opts);
  const ProfileSeries& s = fs.profiles[0];
  for (std::size_t h = 120; h < 168; ++h) {
    CHECK(s.drive_km[h] == 0.0);
    CHECK(s.depot_kw[h] == doctest::Approx(10.0 * bev.depot_rating_kw));
  }
  CHECK(std::accumulate(s.drive_km.begin(), s.drive_km.end(), 0.0) == doctest::Approx(5 * 10 * 300.0));
  CHECK(fs.vehicles() == 10.0);

  opts.anchor_weekday = 5;
  const FleetSeries sat = expand_to_horizon({dp}, bev, opts);
  for (std::size_t h = 0; h < 48; ++h) CHECK(sat.profiles[0].drive_km[h] == 0.0);
  CHECK(is_weekend(0, 5));
  CHECK_FALSE(is_weekend(48, 5));

  opts.anchor_weekday = 0;
  opts.scale_to_working_days = true;
  const FleetSeries scaled = expand_to_horizon({dp}, bev, opts);
  const auto km = scaled.total_drive_km();
  CHECK(std::accumulate(km.begin(), km.end(), 0.0) ==
        doctest::Approx(10 * 300.0 * 240.0 * 168.0 / 8760.0));

  const FleetSpec ers = FleetSpec::default_ers();
  const FleetSeries cat = expand_to_horizon({dp}, ers, opts);
  for (std::size_t h = 0; h < 24; ++h) {
    const ProfileSeries& c = cat.profiles[0];
    CHECK(c.catenary_km[h] == doctest::Approx(c.drive_km[h] * 0.5));
    CHECK(c.drive_kwh[h] == doctest::Approx((c.drive_km[h] - c.catenary_km[h]) * ers.consumption_battery_kwh_per_km));
  }
}

TEST_CASE("regression refit recovers the generating coefficients") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(5.0, 800.0), w(1.0, 50.0);
  std::vector<TransportRelation> rel;
  for (int i = 0; i < 200; ++i) rel.push_back({dist(rng), "g", w(rng), 0.5});
  const MileageRegression truth{18000.0, 0.31, 0.0};
  auto classes = default_distance_classes();
  const auto means = class_mean_mileage(rel, classes, truth);
  for (std::size_t k = 0; k < classes.size(); ++k) classes[k].target_km = means[k];
  const RegressionFit fit = fit_regression(rel, classes);
  CHECK(fit.reg.a == doctest::Approx(18000.0).epsilon(1e-6));
  CHECK(fit.reg.b == doctest::Approx(0.31).epsilon(1e-6));
  CHECK(fit.max_relative_error() < 1e-8);
}

TEST_CASE("bundled synthesis yields eight bins and nineteen profiles") {
  const SynthResult s = synthesize(load_synth_config(data_dir() / "synth.yaml"));
  CHECK(s.stylized.size() == 8);
  CHECK(s.starts.profiles.size() == 19);
  const FleetSpec fleet = attach_profiles(load_fleet(data_dir() / "fleet_bev.yaml"), s.starts.profiles);
  CHECK(fleet.fleet_size == doctest::Approx(318574.0).epsilon(1e-3));
  CHECK(annual_fleet_km(s.starts.profiles, 240.0) == doctest::Approx(28.31e9).epsilon(1e-3));

  TempDir dir("synth");
  write_stylized_table(dir / "stylized.csv", s.stylized);
  write_start_table(dir / "starts.csv", s.starts);
  CHECK(std::filesystem::file_size(dir / "stylized.csv") > 0);
  CHECK(std::filesystem::file_size(dir / "starts.csv") > 0);
}

TEST_CASE("fuel demand follows driven kilometres") {
  const StylizedProfile sp = stylized(5, 250.0, 0.5, 0.0);
  DrivingProfile dp;
  dp.id = "p";
  dp.vehicles = 4.0;
  dp.weight = 1.0;
  dp.day = layout_day(sp, 8);
  FuelChainSpec chain = load_fuel_chain(data_dir() / "fuel_chain.yaml");
  ExpandOptions opts;
  opts.horizon = 168;
  opts.scale_to_working_days = false;
  const FuelDemand d = fuel_demand_series({dp}, chain, opts);
  const double km = 5 * 4 * 250.0;
  CHECK(std::accumulate(d.km.begin(), d.km.end(), 0.0) == doctest::Approx(km));
  CHECK(d.total_h2_kg() == doctest::Approx(km * chain.h2_kg_per_100km / 100.0));
  CHECK(d.total_diesel_l() == doctest::Approx(km * chain.diesel_l_per_100km / 100.0));
}
