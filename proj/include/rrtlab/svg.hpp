#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rrtlab/planner.hpp"
#include "rrtlab/space.hpp"

namespace rrtlab {

// one named curve / point cloud for the chart helpers
struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Self-contained SVG documents.  Output is deterministic for identical input
// (fixed canvas, fixed palette, fixed number formatting) so figures can be
// hashed alongside the CSVs.

std::string svg_bar_chart(const std::string& title, const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<std::string>& bar_labels,
                          const std::vector<double>& values);

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series,
                           bool log_x = false, bool log_y = false);

std::string svg_scatter(const std::string& title, const std::string& x_label,
                        const std::string& y_label,
                        const std::vector<SvgSeries>& series,
                        bool log_x = false, bool log_y = false);

// top-down view of a planar tree: obstacles, edges, optional path + goal
std::string svg_tree(const Tree& tree, const Workspace& ws,
                     const std::vector<State>& path,
                     const std::optional<GoalRegion>& goal);

}  // namespace rrtlab
