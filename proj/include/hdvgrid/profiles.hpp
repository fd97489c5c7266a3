#pragma once

// Synthetic heavy-duty driving profiles.
//
// Pipeline: relation table -> mileage regression -> per-relation daily
// operations -> stylized operating-hour bins -> start-time weights -> hourly
// fleet series over the model horizon. Daily figures are per vehicle and
// working day; series are fleet aggregates in km, kWh and kW.

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hdvgrid/core.hpp"

namespace hdvgrid {

struct TransportRelation {
  double distance_km = 0.0;
  std::string goods_class;
  double weight = 0.0;  // vehicles on this relation
  double motorway_share = 0.0;
};

void validate(const TransportRelation& r);

/// Annual mileage M = a * R^b + c (km/yr) as a function of relation distance R.
struct MileageRegression {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

double annual_mileage(const MileageRegression& reg, double distance_km);

/// Relations with lower_km <= R < upper_km; target is the mean annual mileage.
struct DistanceClass {
  std::string name;
  double lower_km = 0.0;
  double upper_km = kInf;
  double target_km = 0.0;
};

std::vector<DistanceClass> default_distance_classes();

struct RegressionOptions {
  bool allow_offset = false;  // otherwise c is held at 0
  double b_min = 0.0;
  double b_max = 1.5;
  int max_iterations = 200;
  double tolerance = 1e-10;   // on b
};

struct RegressionFit {
  MileageRegression reg;
  std::vector<double> class_means;  // vehicle-weighted, same order as the classes
  std::vector<double> relative_errors;
  int iterations = 0;

  double max_relative_error() const;
};

/// Least squares on relative class-mean deviations. For fixed b the optimal
/// a (and c) have a closed form; b is found by golden-section search.
RegressionFit fit_regression(const std::vector<TransportRelation>& relations,
                             const std::vector<DistanceClass>& classes,
                             const RegressionOptions& opts = {});

/// Vehicle-weighted mean annual mileage of the relations in each class
/// (NaN for empty classes).
std::vector<double> class_mean_mileage(const std::vector<TransportRelation>& relations,
                                       const std::vector<DistanceClass>& classes,
                                       const MileageRegression& reg);

struct SynthParams {
  double working_days = 240.0;
  double speed_kmh = 79.0;
  double break_threshold_h = 4.5;
  double break_h = 0.75;
  /// Idle time per stop by goods class; classes not listed use the default.
  std::map<std::string, double> idle_per_stop_h;
  double default_idle_per_stop_h = 0.5;
  int min_bin = 3;
  int max_bin = 10;

  double idle_per_stop(const std::string& goods_class) const;
};

struct DailyOperations {
  double daily_km = 0.0;
  double trips = 0.0;
  double stops = 0.0;
  double journey_h = 0.0;
  double idle_h = 0.0;
  double break_h = 0.0;
  double operating_h = 0.0;
  int bin = 0;  // operating hours rounded to the nearest hour, clamped to the bin range
};

DailyOperations daily_operations(const TransportRelation& relation, const MileageRegression& reg,
                                 const SynthParams& params);

struct StylizedProfile {
  int operating_hours = 0;
  double avg_distance_km = 0.0;
  double avg_daily_km = 0.0;
  double avg_journey_h = 0.0;
  double avg_idle_h = 0.0;
  double avg_break_h = 0.0;
  double avg_operating_h = 0.0;  // = journey + idle + break
  double vehicles = 0.0;
  double motorway_share = 0.0;   // mileage-weighted

  double annual_km(double working_days) const { return avg_daily_km * working_days * vehicles; }
};

/// One profile per non-empty operating-hour bin, ascending.
std::vector<StylizedProfile> build_stylized_profiles(const std::vector<TransportRelation>& relations,
                                                     const MileageRegression& reg,
                                                     const SynthParams& params);

enum class DayState { Depot, Driving, Stop, Break };

std::string_view to_string(DayState s);

/// Hour-of-day plan for one vehicle of a stylized profile leaving at `start_hour`.
struct DayLayout {
  std::array<DayState, 24> state{};
  std::array<double, 24> km{};  // per vehicle

  int driving_hours() const;
  double daily_km() const;
};

/// Driving block from the start hour with idle stops spread evenly inside it
/// and the break at the middle of the driving hours.
DayLayout layout_day(const StylizedProfile& profile, int start_hour);

/// A stylized profile bound to one start hour.
struct DrivingProfile {
  std::string id;
  int operating_hours = 0;
  int start_hour = 0;
  double weight = 0.0;     // share of the stylized profile's vehicles, sums to 1 per profile
  double share = 0.0;      // share of total fleet mileage
  double vehicles = 0.0;
  double motorway_share = 0.0;
  DayLayout day;
};

using StartCandidates = std::map<int, std::vector<int>>;

/// Two start hours for most bins, three for 8 h and four for 9 h.
StartCandidates default_start_candidates();
/// Hourly share of daily truck mileage with a morning peak.
std::vector<double> default_target_curve();

struct StartTimeFit {
  std::vector<DrivingProfile> profiles;
  std::vector<double> fitted_curve;  // fleet km per hour of day
  std::vector<double> target_curve;  // rescaled to the fleet's daily km
};

/// Non-negative least squares on the deviation of the synthesized hourly
/// mileage from the target curve, with each profile's weights summing to 1.
StartTimeFit assign_start_times(const std::vector<StylizedProfile>& profiles,
                                const std::vector<double>& target,
                                const StartCandidates& candidates = default_start_candidates());

struct ProfileSeries {
  std::string id;
  double vehicles = 0.0;
  std::vector<double> drive_km;        // fleet km driven
  std::vector<double> catenary_km;     // of which under catenary
  std::vector<double> drive_kwh;       // battery-side driving energy
  std::vector<double> catenary_kwh;    // wheel energy drawn from the catenary
  std::vector<double> catenary_kw;     // spare catenary power for battery charging (grid side)
  std::vector<double> depot_kw;        // nominal connection capacity, grid side
  std::vector<double> stop_kw;
  std::vector<double> break_kw;

  std::vector<double> connection_kw() const;  // depot + stop + break
};

struct FleetSeries {
  std::size_t horizon = 0;
  std::vector<ProfileSeries> profiles;

  double vehicles() const;
  std::vector<double> total_drive_km() const;
};

struct ExpandOptions {
  std::size_t horizon = 168;
  int anchor_weekday = 0;  // 0 = Monday
  /// Scale weekday driving so the horizon carries its pro-rata share of the
  /// working days per year.
  bool scale_to_working_days = true;
  double working_days = 240.0;
  double speed_kmh = 79.0;
};

bool is_weekend(std::size_t hour, int anchor_weekday);

/// Hourly fleet series. Weekends carry no driving and full depot connection.
FleetSeries expand_to_horizon(const std::vector<DrivingProfile>& profiles, const FleetSpec& fleet,
                              const ExpandOptions& opts);

struct FuelDemand {
  std::vector<double> km;
  std::vector<double> h2_kg;
  std::vector<double> diesel_l;

  double total_h2_kg() const;
  double total_diesel_l() const;
};

FuelDemand fuel_demand_series(const std::vector<DrivingProfile>& profiles,
                              const FuelChainSpec& chain, const ExpandOptions& opts);

/// Yearly fleet mileage implied by the driving profiles (km/yr).
double annual_fleet_km(const std::vector<DrivingProfile>& profiles, double working_days);

/// Everything `synth` needs, loaded from one YAML document.
struct SynthConfig {
  std::filesystem::path relations;
  SynthParams params;
  std::vector<DistanceClass> classes = default_distance_classes();
  RegressionOptions regression;
  bool fit = true;
  MileageRegression fixed_regression{21180.0, 0.2979, 0.0};  // used when fit is false
  StartCandidates start_candidates = default_start_candidates();
  std::vector<double> target_curve = default_target_curve();
};

struct SynthResult {
  std::vector<TransportRelation> relations;
  RegressionFit regression;
  std::vector<StylizedProfile> stylized;
  StartTimeFit starts;
};

std::vector<TransportRelation> load_relations(const std::filesystem::path& path);
SynthConfig load_synth_config(const std::filesystem::path& path);

SynthResult synthesize(const SynthConfig& cfg);
SynthResult synthesize(const SynthConfig& cfg, std::vector<TransportRelation> relations);

/// Copies per-profile vehicle counts and the fleet size into a fleet spec.
FleetSpec attach_profiles(FleetSpec fleet, const std::vector<DrivingProfile>& profiles);

void write_stylized_table(const std::filesystem::path& path,
                          const std::vector<StylizedProfile>& profiles);
void write_start_table(const std::filesystem::path& path, const StartTimeFit& fit);
/// One file per profile: hour, drive_kWh, depot_kW, stop_kW, break_kW, catenary_km.
void write_fleet_series(const std::filesystem::path& dir, const FleetSeries& series);
void write_fuel_demand(const std::filesystem::path& path, const FuelDemand& demand);

}  // namespace hdvgrid
