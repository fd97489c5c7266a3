#pragma once

// Standalone SVG charts.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace hdvgrid {

struct Series {
  std::string name;
  std::vector<double> values;
};

/// One bar per label; negative values hang below the axis.
void write_bar_chart(const std::filesystem::path& path, const std::string& title, const std::string& unit,
                     const std::vector<std::string>& labels, const std::vector<double>& values);

/// Stacked bars, one per group; each series contributes one segment per group.
void write_stacked_bars(const std::filesystem::path& path, const std::string& title, const std::string& unit,
                        const std::vector<std::string>& groups, const std::vector<Series>& series);

/// Stacked areas for `stacked`, lines for `lines`, over hours [0, n).
void write_time_panel(const std::filesystem::path& path, const std::string& title, const std::string& unit,
                      const std::vector<Series>& stacked, const std::vector<Series>& lines);

}  // namespace hdvgrid
