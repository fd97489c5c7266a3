#include "hdvgrid/charging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hdvgrid/config_io.hpp"

namespace hdvgrid {

std::string_view to_string(WindowKind k) {
  switch (k) {
    case WindowKind::Depot: return "depot";
    case WindowKind::Stop: return "stop";
    case WindowKind::Break: return "break";
    case WindowKind::Catenary: return "catenary";
  }
  return "?";
}

std::vector<ConnectionWindow> connection_windows(const ProfileSeries& series, const FleetSpec& fleet,
                                                 const BalancedOptions& opts) {
  const std::size_t H = series.depot_kw.size();
  const double eta = fleet.charging_efficiency;
  std::vector<ConnectionWindow> out;
  auto kind_at = [&](std::size_t h, double& rating) -> int {
    rating = 0.0;
    if (series.depot_kw[h] > 0.0) {
      rating = series.depot_kw[h] * eta;
      return static_cast<int>(WindowKind::Depot);
    }
    if (series.stop_kw[h] > 0.0) {
      rating = series.stop_kw[h] * eta;
      return static_cast<int>(WindowKind::Stop);
    }
    if (series.break_kw[h] > 0.0) {
      rating = series.break_kw[h] * eta;
      return static_cast<int>(WindowKind::Break);
    }
    if (opts.catenary_charging && series.catenary_kw[h] > 0.0) {
      rating = series.catenary_kw[h] * eta;
      return static_cast<int>(WindowKind::Catenary);
    }
    return -1;
  };
  for (std::size_t h = 0; h < H;) {
    double r = 0.0;
    const int k = kind_at(h, r);
    if (k < 0) {
      ++h;
      continue;
    }
    ConnectionWindow w;
    w.kind = static_cast<WindowKind>(k);
    w.start = h;
    while (h < H) {
      double rh = 0.0;
      if (kind_at(h, rh) != k) break;
      w.rating_kw.push_back(rh);
      ++h;
    }
    w.end = h;
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

// Constant power p with sum_h min(rating_h, p) = energy, by bisection.
double level_power(const std::vector<double>& rating, double energy) {
  double total = 0.0, hi = 0.0;
  for (double r : rating) {
    total += r;
    hi = std::max(hi, r);
  }
  if (energy <= 0.0) return 0.0;
  if (energy >= total) return hi;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double r : rating) s += std::min(r, mid);
    (s < energy ? lo : hi) = mid;
  }
  return hi;
}

// One pass over the horizon from the given initial SoC; returns the final SoC.
double simulate(const ProfileSeries& s, ProfilePlan& plan, double soc0) {
  const std::size_t H = s.drive_kwh.size();
  const double cap = plan.capacity_kwh;
  std::fill(plan.battery_kw.begin(), plan.battery_kw.end(), 0.0);
  std::size_t next = 0;
  double soc = soc0;
  const double tol = 1e-9 * std::max(1.0, cap);
  for (std::size_t h = 0; h < H; ++h) {
    if (next < plan.windows.size() && plan.windows[next].start == h) {
      const auto& w = plan.windows[next];
      double drive = 0.0;
      for (std::size_t t = w.start; t < w.end; ++t) drive += s.drive_kwh[t];
      const double need = cap - soc + drive;
      const double p = level_power(w.rating_kw, need);
      for (std::size_t t = w.start; t < w.end; ++t) plan.battery_kw[t] = std::min(w.rating_kw[t - w.start], p);
      ++next;
    }
    double in = plan.battery_kw[h];
    // never overfill within an hour
    in = std::min(in, std::max(0.0, cap - soc + s.drive_kwh[h]));
    plan.battery_kw[h] = in;
    soc += in - s.drive_kwh[h];
    if (soc < -tol)
      throw ValidationError("profile " + s.id + ": battery empty at hour " + std::to_string(h) +
                            " (short by " + format_number(-soc) + " kWh)");
    soc = std::clamp(soc, 0.0, cap);
    plan.soc_kwh[h] = soc;
  }
  return soc;
}

}  // namespace

std::vector<double> BalancedChargePlan::total_grid_kw() const {
  std::vector<double> v(horizon, 0.0);
  for (const auto& p : profiles)
    for (std::size_t h = 0; h < horizon; ++h) v[h] += p.grid_kw[h];
  return v;
}

BalancedChargePlan balanced_charging(const FleetSeries& series, const FleetSpec& fleet,
                                     const BalancedOptions& opts) {
  validate(fleet);
  BalancedChargePlan plan;
  plan.horizon = series.horizon;
  for (const auto& s : series.profiles) {
    ProfilePlan p;
    p.id = s.id;
    p.capacity_kwh = s.vehicles * fleet.battery_capacity_kwh;
    p.windows = connection_windows(s, fleet, opts);
    p.battery_kw.assign(series.horizon, 0.0);
    p.soc_kwh.assign(series.horizon, 0.0);
    double soc0 = p.capacity_kwh;
    // SoC at the end of the horizon must equal the start: iterate to the fixed point.
    for (int it = 0; it < opts.max_cycle_iterations; ++it) {
      const double soc_end = simulate(s, p, soc0);
      const bool done = std::abs(soc_end - soc0) <= 1e-12 * std::max(1.0, p.capacity_kwh);
      soc0 = soc_end;
      if (done) break;
    }
    simulate(s, p, soc0);
    p.initial_soc_kwh = soc0;
    p.grid_kw.resize(series.horizon);
    for (std::size_t h = 0; h < series.horizon; ++h) p.grid_kw[h] = p.battery_kw[h] / fleet.charging_efficiency;
    plan.profiles.push_back(std::move(p));
  }
  return plan;
}

EnergyBalanceReport verify_energy_balance(const BalancedChargePlan& plan, const FleetSeries& series,
                                          const FleetSpec& fleet, double tolerance) {
  EnergyBalanceReport rep;
  auto flag = [&](const std::string& what) { rep.violations.push_back(what); };
  if (plan.profiles.size() != series.profiles.size()) {
    flag("plan and series cover different profiles");
    return rep;
  }
  for (std::size_t k = 0; k < plan.profiles.size(); ++k) {
    const auto& p = plan.profiles[k];
    const auto& s = series.profiles[k];
    if (p.id != s.id) {
      flag("profile order mismatch: " + p.id + " vs " + s.id);
      continue;
    }
    double inflow = 0.0, drive = 0.0;
    for (std::size_t h = 0; h < plan.horizon; ++h) {
      inflow += p.grid_kw[h] * fleet.charging_efficiency;
      drive += s.drive_kwh[h];
    }
    const double rel = std::abs(inflow - drive) / std::max({1.0, drive, inflow});
    rep.max_relative_error = std::max(rep.max_relative_error, rel);
    if (rel > tolerance)
      flag(p.id + ": inflow " + format_number(inflow) + " kWh vs driving " + format_number(drive) + " kWh");

    const double cap = p.capacity_kwh;
    const double slack = tolerance * std::max(1.0, cap);
    double soc = p.initial_soc_kwh;
    for (std::size_t h = 0; h < plan.horizon; ++h) {
      soc += p.grid_kw[h] * fleet.charging_efficiency - s.drive_kwh[h];
      if (soc < -slack || soc > cap + slack) {
        flag(p.id + ": state of charge out of range at hour " + std::to_string(h));
        break;
      }
      const double limit = s.depot_kw[h] + s.stop_kw[h] + s.break_kw[h] + s.catenary_kw[h];
      if (p.grid_kw[h] > limit * (1.0 + tolerance) + tolerance) {
        flag(p.id + ": draw above connection rating at hour " + std::to_string(h));
        break;
      }
    }
  }
  return rep;
}

void write_plan(const std::filesystem::path& path, const BalancedChargePlan& plan) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string(), 0, "", "cannot write file");
  out << "hour,profile_id,grid_draw_MW,soc_MWh\n";
  for (std::size_t h = 0; h < plan.horizon; ++h)
    for (const auto& p : plan.profiles)
      out << h << ',' << p.id << ',' << format_number(p.grid_kw[h] / 1000.0) << ','
          << format_number(p.soc_kwh[h] / 1000.0) << '\n';
}

}  // namespace hdvgrid
