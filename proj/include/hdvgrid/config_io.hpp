#pragma once

// Reading and writing of the declarative configuration files.
//
// Catalog, fleet, fuel-chain and scenario files are YAML documents whose keys
// are the field names of the corresponding structs. Time series live in
// columnar text files: one header line, then one value per line. Paths inside
// a YAML file are resolved relative to that file.

#include <filesystem>
#include <string>
#include <vector>

#include "hdvgrid/core.hpp"

namespace hdvgrid {

TimeSeries load_series(const std::filesystem::path& path);
void write_series(const std::filesystem::path& path, const std::string& header,
                  const std::vector<double>& values);

TechnologyCatalog load_catalog(const std::filesystem::path& path);
FleetSpec load_fleet(const std::filesystem::path& path);
FuelChainSpec load_fuel_chain(const std::filesystem::path& path);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Locale-independent shortest round-trip formatting used by every writer.
std::string format_number(double v);

}  // namespace hdvgrid
