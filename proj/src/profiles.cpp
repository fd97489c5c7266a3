#include "hdvgrid/profiles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hdvgrid/config_io.hpp"

namespace hdvgrid {

namespace fs = std::filesystem;

void validate(const TransportRelation& r) {
  if (!(r.distance_km > 0.0)) throw ValidationError("relation distance must be > 0");
  if (!(r.weight >= 0.0)) throw ValidationError("relation weight must be >= 0");
  if (!(r.motorway_share >= 0.0 && r.motorway_share <= 1.0))
    throw ValidationError("motorway share in [0,1]");
}

double annual_mileage(const MileageRegression& reg, double distance_km) {
  return reg.a * std::pow(distance_km, reg.b) + reg.c;
}

std::vector<DistanceClass> default_distance_classes() {
  return {{"<50", 0.0, 50.0, 45684.0}, {"50-150", 50.0, 150.0, 78190.0}, {">150", 150.0, kInf, 117121.0}};
}

double RegressionFit::max_relative_error() const {
  double e = 0.0;
  for (double r : relative_errors)
    if (std::isfinite(r)) e = std::max(e, std::abs(r));
  return e;
}

namespace {

int class_index(const std::vector<DistanceClass>& classes, double r) {
  for (std::size_t k = 0; k < classes.size(); ++k)
    if (r >= classes[k].lower_km && r < classes[k].upper_km) return static_cast<int>(k);
  return -1;
}

// Vehicle-weighted mean of R^b per class.
std::vector<double> mean_power(const std::vector<TransportRelation>& rel,
                               const std::vector<DistanceClass>& classes, double b) {
  std::vector<double> s(classes.size(), 0.0), w(classes.size(), 0.0);
  for (const auto& r : rel) {
    const int k = class_index(classes, r.distance_km);
    if (k < 0) continue;
    s[k] += r.weight * std::pow(r.distance_km, b);
    w[k] += r.weight;
  }
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = w[k] > 0.0 ? s[k] / w[k] : std::nan("");
  return s;
}

// Best (a, c) for fixed b and the resulting squared relative error.
double fit_linear(const std::vector<double>& u, const std::vector<DistanceClass>& classes,
                  bool allow_offset, double& a, double& c) {
  // minimize sum_k ((a u_k + c - t_k) / t_k)^2
  double suu = 0, su = 0, s1 = 0, sut = 0, st = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!std::isfinite(u[k])) continue;
    const double t = classes[k].target_km;
    const double x = u[k] / t, y = 1.0 / t;
    suu += x * x;
    su += x * y;
    s1 += y * y;
    sut += x;
    st += y;
  }
  a = suu > 0.0 ? sut / suu : 0.0;
  c = 0.0;
  if (allow_offset) {
    const double det = suu * s1 - su * su;
    if (std::abs(det) > 1e-300) {
      const double a2 = (sut * s1 - su * st) / det;
      const double c2 = (suu * st - su * sut) / det;
      if (c2 >= 0.0 && a2 >= 0.0) {
        a = a2;
        c = c2;
      }
    }
  }
  a = std::max(a, 0.0);
  double err = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!std::isfinite(u[k])) continue;
    const double t = classes[k].target_km;
    err += std::pow((a * u[k] + c - t) / t, 2);
  }
  return err;
}

}  // namespace

std::vector<double> class_mean_mileage(const std::vector<TransportRelation>& relations,
                                       const std::vector<DistanceClass>& classes,
                                       const MileageRegression& reg) {
  std::vector<double> s(classes.size(), 0.0), w(classes.size(), 0.0);
  for (const auto& r : relations) {
    const int k = class_index(classes, r.distance_km);
    if (k < 0) continue;
    s[k] += r.weight * annual_mileage(reg, r.distance_km);
    w[k] += r.weight;
  }
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = w[k] > 0.0 ? s[k] / w[k] : std::nan("");
  return s;
}

RegressionFit fit_regression(const std::vector<TransportRelation>& relations,
                             const std::vector<DistanceClass>& classes,
                             const RegressionOptions& opts) {
  if (relations.empty()) throw ValidationError("relations non-empty");
  if (classes.empty()) throw ValidationError("at least one distance class required");
  for (const auto& c : classes)
    if (!(c.target_km > 0.0)) throw ValidationError("class targets must be > 0");

  std::vector<double> w(classes.size(), 0.0);
  for (const auto& r : relations) {
    const int k = class_index(classes, r.distance_km);
    if (k < 0 || r.weight <= 0.0) continue;
    w[k] += r.weight;
  }
  int populated = 0, single = -1;
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] > 0.0) {
      ++populated;
      single = static_cast<int>(k);
    }
  if (populated == 0) throw ValidationError("no relation falls into a distance class");

  RegressionFit fit;
  if (populated == 1) {
    // One class carries no information about the slope: offset-only fit.
    fit.reg = {0.0, 0.3, classes[static_cast<std::size_t>(single)].target_km};
  } else {
    auto objective = [&](double b, double& a, double& c) {
      return fit_linear(mean_power(relations, classes, b), classes, opts.allow_offset, a, c);
    };
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = opts.b_min, hi = opts.b_max;
    double a1, c1, a2, c2;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = objective(x1, a1, c1), f2 = objective(x2, a2, c2);
    int it = 0;
    for (; it < opts.max_iterations && hi - lo > opts.tolerance; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = objective(x1, a1, c1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = objective(x2, a2, c2);
      }
    }
    if (hi - lo > opts.tolerance * 1e3)
      throw std::runtime_error("mileage regression did not converge in " +
                               std::to_string(opts.max_iterations) + " iterations");
    const double b = 0.5 * (lo + hi);
    double a, c;
    objective(b, a, c);
    fit.reg = {a, b, c};
    fit.iterations = it;
  }
  fit.class_means = class_mean_mileage(relations, classes, fit.reg);
  for (std::size_t k = 0; k < classes.size(); ++k)
    fit.relative_errors.push_back((fit.class_means[k] - classes[k].target_km) / classes[k].target_km);
  return fit;
}

double SynthParams::idle_per_stop(const std::string& goods_class) const {
  auto it = idle_per_stop_h.find(goods_class);
  return it == idle_per_stop_h.end() ? default_idle_per_stop_h : it->second;
}

DailyOperations daily_operations(const TransportRelation& relation, const MileageRegression& reg,
                                 const SynthParams& params) {
  validate(relation);
  DailyOperations op;
  op.daily_km = annual_mileage(reg, relation.distance_km) / params.working_days;
  op.trips = op.daily_km / relation.distance_km;
  op.stops = op.trips;
  op.journey_h = op.daily_km / params.speed_kmh;
  op.idle_h = op.stops * params.idle_per_stop(relation.goods_class);
  op.break_h = op.journey_h > params.break_threshold_h ? params.break_h : 0.0;
  op.operating_h = op.journey_h + op.idle_h + op.break_h;
  op.bin = std::clamp(static_cast<int>(std::floor(op.operating_h + 0.5)), params.min_bin, params.max_bin);
  return op;
}

std::vector<StylizedProfile> build_stylized_profiles(const std::vector<TransportRelation>& relations,
                                                     const MileageRegression& reg,
                                                     const SynthParams& params) {
  if (relations.empty()) throw ValidationError("relations non-empty");
  std::map<int, StylizedProfile> bins;
  std::map<int, double> km_weight;
  for (const auto& r : relations) {
    if (r.weight <= 0.0) continue;
    const DailyOperations op = daily_operations(r, reg, params);
    auto& p = bins[op.bin];
    p.operating_hours = op.bin;
    const double w = r.weight;
    p.vehicles += w;
    p.avg_distance_km += w * r.distance_km;
    p.avg_daily_km += w * op.daily_km;
    p.avg_journey_h += w * op.journey_h;
    p.avg_idle_h += w * op.idle_h;
    p.avg_break_h += w * op.break_h;
    p.motorway_share += w * op.daily_km * r.motorway_share;
    km_weight[op.bin] += w * op.daily_km;
  }
  std::vector<StylizedProfile> out;
  for (auto& [bin, p] : bins) {
    const double v = p.vehicles;
    p.avg_distance_km /= v;
    p.avg_daily_km /= v;
    p.avg_journey_h /= v;
    p.avg_idle_h /= v;
    p.avg_break_h /= v;
    p.avg_operating_h = p.avg_journey_h + p.avg_idle_h + p.avg_break_h;
    p.motorway_share = km_weight[bin] > 0.0 ? p.motorway_share / km_weight[bin] : 0.0;
    out.push_back(p);
  }
  return out;
}

std::string_view to_string(DayState s) {
  switch (s) {
    case DayState::Depot: return "depot";
    case DayState::Driving: return "driving";
    case DayState::Stop: return "stop";
    case DayState::Break: return "break";
  }
  return "?";
}

int DayLayout::driving_hours() const {
  return static_cast<int>(std::count(state.begin(), state.end(), DayState::Driving));
}

double DayLayout::daily_km() const { return std::accumulate(km.begin(), km.end(), 0.0); }

DayLayout layout_day(const StylizedProfile& profile, int start_hour) {
  const int k = profile.operating_hours;
  if (k < 1 || k > 24) throw ValidationError("operating hours must lie in 1..24");
  if (start_hour < 0 || start_hour + k > 24)
    throw ValidationError("start hour " + std::to_string(start_hour) + " with " + std::to_string(k) +
                          " operating hours crosses midnight");
  int brk = static_cast<int>(std::lround(profile.avg_break_h));
  int idle = static_cast<int>(std::lround(profile.avg_idle_h));
  brk = std::clamp(brk, 0, k - 1);
  idle = std::clamp(idle, 0, k - 1 - brk);
  const int drive = k - brk - idle;

  // Events are placed after a number of driving hours, never before the first.
  std::vector<std::pair<int, DayState>> events;
  if (brk > 0) events.emplace_back(std::max(1, drive / 2), DayState::Break);
  for (int j = 1; j <= idle; ++j) {
    const int pos = static_cast<int>(std::lround(static_cast<double>(j) * drive / (idle + 1)));
    events.emplace_back(std::clamp(pos, 1, drive), DayState::Stop);
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  DayLayout day;
  day.state.fill(DayState::Depot);
  const double km_per_hour = profile.avg_daily_km / drive;
  int slot = start_hour;
  std::size_t e = 0;
  for (int d = 0; d <= drive; ++d) {
    while (e < events.size() && events[e].first == d) day.state[slot++] = events[e++].second;
    if (d < drive) {
      day.state[slot] = DayState::Driving;
      day.km[slot] = km_per_hour;
      ++slot;
    }
  }
  return day;
}

StartCandidates default_start_candidates() {
  return {{3, {6, 12}}, {4, {6, 11}},    {5, {5, 11}},       {6, {5, 10}},
          {7, {5, 9}},  {8, {4, 7, 10}}, {9, {3, 6, 9, 12}}, {10, {4, 8}}};
}

std::vector<double> default_target_curve() {
  std::vector<double> v{0.5, 0.4, 0.4, 0.8, 2.0, 4.0, 6.0, 7.2, 7.8, 8.0, 8.2, 7.6,
                        7.0, 6.8, 6.6, 6.2, 5.6, 4.6, 3.4, 2.4, 1.6, 1.2, 0.9, 0.6};
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= s;
  return v;
}

namespace {

// Lawson-Hanson active-set NNLS: min ||A x - b||, x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index n = A.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()) * std::max(1.0, b.cwiseAbs().maxCoeff());

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
    z.setZero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
  };

  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    Eigen::Index t = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        t = j;
      }
    if (t < 0) break;
    passive[static_cast<std::size_t>(t)] = true;
    Eigen::VectorXd z;
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      solve_passive(z);
      bool ok = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) ok = false;
      if (ok) break;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0)
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
    }
    x = z;
  }
  return x;
}

char state_code(DayState s) {
  switch (s) {
    case DayState::Depot: return '.';
    case DayState::Driving: return 'D';
    case DayState::Stop: return 'S';
    case DayState::Break: return 'B';
  }
  return '?';
}

std::string profile_id(int hours, int start) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "op%02d_s%02d", hours, start);
  return buf;
}

}  // namespace

StartTimeFit assign_start_times(const std::vector<StylizedProfile>& profiles,
                                const std::vector<double>& target,
                                const StartCandidates& candidates) {
  if (target.size() != 24) throw ValidationError("target curve must have 24 values");
  double tsum = 0.0;
  for (double v : target) {
    if (!(v >= 0.0)) throw ValidationError("target curve must be non-negative");
    tsum += v;
  }
  if (!(tsum > 0.0)) throw ValidationError("target curve is all zero");

  StartTimeFit fit;
  struct Column {
    std::size_t profile;
    int start;
    DayLayout day;
  };
  std::vector<Column> cols;
  double fleet_km = 0.0;
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    fleet_km += profiles[p].avg_daily_km * profiles[p].vehicles;
    auto it = candidates.find(profiles[p].operating_hours);
    if (it == candidates.end() || it->second.empty())
      throw ValidationError("no start-hour candidates for the " +
                            std::to_string(profiles[p].operating_hours) + "-h profile");
    for (int s : it->second) cols.push_back({p, s, layout_day(profiles[p], s)});
  }
  fit.target_curve.resize(24);
  for (int h = 0; h < 24; ++h) fit.target_curve[h] = target[h] / tsum * fleet_km;

  // Rows 0..23: hourly mileage in units of the mean hourly target; then one
  // heavily weighted row per profile enforcing sum of weights = 1.
  const double unit = fleet_km / 24.0 > 0.0 ? fleet_km / 24.0 : 1.0;
  const double penalty = 1e4;
  const Eigen::Index rows = 24 + static_cast<Eigen::Index>(profiles.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(cols.size()));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  for (int h = 0; h < 24; ++h) b(h) = fit.target_curve[h] / unit;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const auto& c = cols[k];
    const double v = profiles[c.profile].vehicles;
    for (int h = 0; h < 24; ++h) A(h, static_cast<Eigen::Index>(k)) = v * c.day.km[h] / unit;
    A(24 + static_cast<Eigen::Index>(c.profile), static_cast<Eigen::Index>(k)) = penalty;
  }
  for (std::size_t p = 0; p < profiles.size(); ++p) b(24 + static_cast<Eigen::Index>(p)) = penalty;
  Eigen::VectorXd w = nnls(A, b);

  std::vector<double> group(profiles.size(), 0.0);
  for (std::size_t k = 0; k < cols.size(); ++k) group[cols[k].profile] += w(static_cast<Eigen::Index>(k));
  fit.fitted_curve.assign(24, 0.0);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const auto& c = cols[k];
    const auto& sp = profiles[c.profile];
    DrivingProfile d;
    d.id = profile_id(sp.operating_hours, c.start);
    d.operating_hours = sp.operating_hours;
    d.start_hour = c.start;
    d.weight = group[c.profile] > 0.0 ? w(static_cast<Eigen::Index>(k)) / group[c.profile] : 0.0;
    d.vehicles = sp.vehicles * d.weight;
    d.share = fleet_km > 0.0 ? d.vehicles * sp.avg_daily_km / fleet_km : 0.0;
    d.motorway_share = sp.motorway_share;
    d.day = c.day;
    for (int h = 0; h < 24; ++h) fit.fitted_curve[h] += d.vehicles * c.day.km[h];
    fit.profiles.push_back(std::move(d));
  }
  return fit;
}

std::vector<double> ProfileSeries::connection_kw() const {
  std::vector<double> v(depot_kw.size());
  for (std::size_t h = 0; h < v.size(); ++h) v[h] = depot_kw[h] + stop_kw[h] + break_kw[h];
  return v;
}

double FleetSeries::vehicles() const {
  double v = 0.0;
  for (const auto& p : profiles) v += p.vehicles;
  return v;
}

std::vector<double> FleetSeries::total_drive_km() const {
  std::vector<double> km(horizon, 0.0);
  for (const auto& p : profiles)
    for (std::size_t h = 0; h < horizon; ++h) km[h] += p.drive_km[h];
  return km;
}

bool is_weekend(std::size_t hour, int anchor_weekday) {
  const int wd = static_cast<int>((static_cast<std::size_t>(anchor_weekday) + hour / 24) % 7);
  return wd >= 5;
}

namespace {

double working_day_scale(const ExpandOptions& opts) {
  if (opts.horizon % 24 != 0) throw ValidationError("horizon must be a multiple of 24");
  if (!opts.scale_to_working_days) return 1.0;
  std::size_t weekdays = 0;
  for (std::size_t d = 0; d < opts.horizon / 24; ++d)
    if (!is_weekend(d * 24, opts.anchor_weekday)) ++weekdays;
  if (weekdays == 0) return 1.0;
  return opts.working_days * (static_cast<double>(opts.horizon) / kHoursPerYear) /
         static_cast<double>(weekdays);
}

}  // namespace

FleetSeries expand_to_horizon(const std::vector<DrivingProfile>& profiles, const FleetSpec& fleet,
                              const ExpandOptions& opts) {
  const double scale = working_day_scale(opts);
  const std::size_t H = opts.horizon;
  FleetSeries fs;
  fs.horizon = H;
  const bool catenary = fleet.has_catenary();
  for (const auto& p : profiles) {
    ProfileSeries s;
    s.id = p.id;
    s.vehicles = p.vehicles;
    for (auto* v : {&s.drive_km, &s.catenary_km, &s.drive_kwh, &s.catenary_kwh, &s.catenary_kw,
                    &s.depot_kw, &s.stop_kw, &s.break_kw})
      v->assign(H, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
      if (is_weekend(h, opts.anchor_weekday)) {
        s.depot_kw[h] = p.vehicles * fleet.depot_rating_kw;
        continue;
      }
      const int hod = static_cast<int>(h % 24);
      switch (p.day.state[hod]) {
        case DayState::Depot: s.depot_kw[h] = p.vehicles * fleet.depot_rating_kw; break;
        case DayState::Stop:
          if (!catenary) s.stop_kw[h] = p.vehicles * fleet.stop_rating_kw;
          break;
        case DayState::Break:
          if (!catenary) s.break_kw[h] = p.vehicles * fleet.break_rating_kw;
          break;
        case DayState::Driving: {
          const double km = p.vehicles * p.day.km[hod] * scale;
          const double cat = catenary ? km * p.motorway_share : 0.0;
          s.drive_km[h] = km;
          s.catenary_km[h] = cat;
          s.drive_kwh[h] = (km - cat) * fleet.consumption_battery_kwh_per_km;
          s.catenary_kwh[h] = cat * fleet.consumption_catenary_kwh_per_km;
          s.catenary_kw[h] =
              std::max(0.0, cat / opts.speed_kmh * fleet.catenary_rating_kw - s.catenary_kwh[h]);
          break;
        }
      }
    }
    fs.profiles.push_back(std::move(s));
  }
  return fs;
}

double FuelDemand::total_h2_kg() const { return std::accumulate(h2_kg.begin(), h2_kg.end(), 0.0); }
double FuelDemand::total_diesel_l() const {
  return std::accumulate(diesel_l.begin(), diesel_l.end(), 0.0);
}

FuelDemand fuel_demand_series(const std::vector<DrivingProfile>& profiles,
                              const FuelChainSpec& chain, const ExpandOptions& opts) {
  const double scale = working_day_scale(opts);
  FuelDemand fd;
  fd.km.assign(opts.horizon, 0.0);
  for (std::size_t h = 0; h < opts.horizon; ++h) {
    if (is_weekend(h, opts.anchor_weekday)) continue;
    for (const auto& p : profiles) fd.km[h] += p.vehicles * p.day.km[h % 24] * scale;
  }
  fd.h2_kg.resize(opts.horizon);
  fd.diesel_l.resize(opts.horizon);
  for (std::size_t h = 0; h < opts.horizon; ++h) {
    fd.h2_kg[h] = fd.km[h] * chain.h2_kg_per_100km / 100.0;
    fd.diesel_l[h] = fd.km[h] * chain.diesel_l_per_100km / 100.0;
  }
  return fd;
}

double annual_fleet_km(const std::vector<DrivingProfile>& profiles, double working_days) {
  double km = 0.0;
  for (const auto& p : profiles) km += p.vehicles * p.day.daily_km();
  return km * working_days;
}

std::vector<TransportRelation> load_relations(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "", "cannot open relation file");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": relations non-empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      header.push_back(cell);
    }
  }
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError(path.string(), 1, name, "missing column");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cd = column("distance_km"), cg = column("goods_class"), cw = column("weight");
  const auto it_ms = std::find(header.begin(), header.end(), "motorway_share");
  std::vector<TransportRelation> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < header.size())
      throw ConfigError(path.string(), lineno, "", "expected " + std::to_string(header.size()) + " columns");
    auto num = [&](std::size_t c) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cells[c], &used);
        if (used == cells[c].size()) return v;
      } catch (const std::exception&) {
      }
      throw ConfigError(path.string(), lineno, header[c], "expected a number, got '" + cells[c] + "'");
    };
    TransportRelation r;
    r.distance_km = num(cd);
    r.goods_class = cells[cg];
    r.weight = num(cw);
    r.motorway_share = it_ms == header.end() ? 0.0 : num(static_cast<std::size_t>(it_ms - header.begin()));
    try {
      validate(r);
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(std::move(r));
  }
  if (out.empty()) throw ValidationError(path.string() + ": relations non-empty");
  return out;
}

SynthResult synthesize(const SynthConfig& cfg) { return synthesize(cfg, load_relations(cfg.relations)); }

SynthResult synthesize(const SynthConfig& cfg, std::vector<TransportRelation> relations) {
  SynthResult r;
  r.relations = std::move(relations);
  if (cfg.fit) {
    r.regression = fit_regression(r.relations, cfg.classes, cfg.regression);
  } else {
    r.regression.reg = cfg.fixed_regression;
    r.regression.class_means = class_mean_mileage(r.relations, cfg.classes, cfg.fixed_regression);
    for (std::size_t k = 0; k < cfg.classes.size(); ++k)
      r.regression.relative_errors.push_back((r.regression.class_means[k] - cfg.classes[k].target_km) /
                                             cfg.classes[k].target_km);
  }
  r.stylized = build_stylized_profiles(r.relations, r.regression.reg, cfg.params);
  r.starts = assign_start_times(r.stylized, cfg.target_curve, cfg.start_candidates);
  return r;
}

FleetSpec attach_profiles(FleetSpec fleet, const std::vector<DrivingProfile>& profiles) {
  fleet.profile_vehicles.clear();
  double total = 0.0;
  for (const auto& p : profiles) {
    fleet.profile_vehicles[p.id] = p.vehicles;
    total += p.vehicles;
  }
  fleet.fleet_size = total;
  return fleet;
}

void write_stylized_table(const fs::path& path, const std::vector<StylizedProfile>& profiles) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string(), 0, "", "cannot write file");
  out << "operating_h,avg_distance_km,avg_daily_km,avg_journey_h,avg_idle_h,avg_break_h,vehicles,"
         "motorway_share\n";
  for (const auto& p : profiles)
    out << p.operating_hours << ',' << format_number(p.avg_distance_km) << ','
        << format_number(p.avg_daily_km) << ',' << format_number(p.avg_journey_h) << ','
        << format_number(p.avg_idle_h) << ',' << format_number(p.avg_break_h) << ','
        << format_number(p.vehicles) << ',' << format_number(p.motorway_share) << '\n';
}

void write_start_table(const fs::path& path, const StartTimeFit& fit) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string(), 0, "", "cannot write file");
  out << "profile_id,operating_h,start_hour,weight,mileage_share,vehicles,layout\n";
  for (const auto& p : fit.profiles) {
    std::string layout;
    for (DayState s : p.day.state) layout += state_code(s);
    out << p.id << ',' << p.operating_hours << ',' << p.start_hour << ',' << format_number(p.weight)
        << ',' << format_number(p.share) << ',' << format_number(p.vehicles) << ',' << layout << '\n';
  }
}

void write_fleet_series(const fs::path& dir, const FleetSeries& series) {
  fs::create_directories(dir);
  for (const auto& p : series.profiles) {
    const fs::path path = dir / (p.id + ".csv");
    std::ofstream out(path);
    if (!out) throw ConfigError(path.string(), 0, "", "cannot write file");
    out << "hour,drive_kWh,depot_kW,stop_kW,break_kW,catenary_km\n";
    for (std::size_t h = 0; h < series.horizon; ++h)
      out << h << ',' << format_number(p.drive_kwh[h]) << ',' << format_number(p.depot_kw[h]) << ','
          << format_number(p.stop_kw[h]) << ',' << format_number(p.break_kw[h]) << ','
          << format_number(p.catenary_km[h]) << '\n';
  }
}

void write_fuel_demand(const fs::path& path, const FuelDemand& demand) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string(), 0, "", "cannot write file");
  out << "hour,km,h2_kg,diesel_l\n";
  for (std::size_t h = 0; h < demand.km.size(); ++h)
    out << h << ',' << format_number(demand.km[h]) << ',' << format_number(demand.h2_kg[h]) << ','
        << format_number(demand.diesel_l[h]) << '\n';
}

}  // namespace hdvgrid
