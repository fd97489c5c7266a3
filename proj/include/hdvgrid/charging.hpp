#pragma once

// "Balanced" charging for inflexible fleets: whenever a vehicle is connected
// it charges at the constant power that fills the battery exactly by the end
// of the connection window, or at full rating if that is not enough.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "hdvgrid/core.hpp"
#include "hdvgrid/profiles.hpp"

namespace hdvgrid {

enum class WindowKind { Depot, Stop, Break, Catenary };

std::string_view to_string(WindowKind k);

struct ConnectionWindow {
  std::size_t start = 0;  // first hour
  std::size_t end = 0;    // one past the last hour
  std::vector<double> rating_kw;  // effective into the battery, per hour of the window
  WindowKind kind = WindowKind::Depot;

  std::size_t length() const noexcept { return end - start; }
};

struct BalancedOptions {
  /// Let catenary-connected driving top up the battery. Off by default: the
  /// catenary then serves the wheels only.
  bool catenary_charging = false;
  int max_cycle_iterations = 200;
};

/// Maximal runs of hours with the same connection kind and a positive rating.
std::vector<ConnectionWindow> connection_windows(const ProfileSeries& series, const FleetSpec& fleet,
                                                 const BalancedOptions& opts = {});

struct ProfilePlan {
  std::string id;
  double capacity_kwh = 0.0;
  std::vector<double> grid_kw;     // grid-side draw
  std::vector<double> battery_kw;  // inflow into the battery
  std::vector<double> soc_kwh;     // at the end of each hour
  double initial_soc_kwh = 0.0;    // equals soc_kwh.back() on a converged cyclic plan
  std::vector<ConnectionWindow> windows;
};

struct BalancedChargePlan {
  std::size_t horizon = 0;
  std::vector<ProfilePlan> profiles;

  std::vector<double> total_grid_kw() const;
};

/// Throws ValidationError naming the profile and hour when driving would
/// empty a battery.
BalancedChargePlan balanced_charging(const FleetSeries& series, const FleetSpec& fleet,
                                     const BalancedOptions& opts = {});

struct EnergyBalanceReport {
  std::vector<std::string> violations;
  double max_relative_error = 0.0;

  bool ok() const noexcept { return violations.empty(); }
};

/// Checks per profile that battery inflow equals battery-side driving energy
/// over the cyclic horizon, that the SoC stays in [0, capacity] and that the
/// draw respects the connection ratings.
EnergyBalanceReport verify_energy_balance(const BalancedChargePlan& plan, const FleetSeries& series,
                                          const FleetSpec& fleet, double tolerance = 1e-6);

/// Columns: hour, profile_id, grid_draw_MW, soc_MWh.
void write_plan(const std::filesystem::path& path, const BalancedChargePlan& plan);

}  // namespace hdvgrid
