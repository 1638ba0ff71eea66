#pragma once

// Minimal self-contained SVG plots: space-time heatmaps with trajectory
// overlays, line plots and scatter plots.

#include <string>
#include <vector>

namespace fluxlab::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  ///< NaN breaks the polyline
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct Axes {
  std::string title;
  std::string xlabel;
  std::string ylabel;
};

/// values[row][col] over x in [x0, x1] (columns) and t in [t0, t1] (rows),
/// time running upwards; overlays are drawn as (x, t) polylines.
std::string heatmap(const std::vector<std::vector<double>>& values, double x0, double x1, double t0, double t1,
                    const Axes& axes, const std::vector<Series>& overlays = {});

std::string line_plot(const std::vector<Series>& series, const Axes& axes);

std::string scatter(const std::vector<Series>& series, const Axes& axes);

void save(const std::string& path, const std::string& svg);

}  // namespace fluxlab::svg
