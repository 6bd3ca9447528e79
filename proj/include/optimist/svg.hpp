#pragma once

// Two-panel static plot of a run: the (x[1], y[1]) path in the unit square
// and the duality gap against t.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "optimist/dynamics.hpp"

namespace optimist {

struct PlotSample {
  double t;
  double x1;
  double y1;
  double gap;
  std::optional<double> log10_gap;  // absent when the gap is exactly zero
};

struct PlotOptions {
  bool log_gap = false;
  std::size_t max_points = 4000;           // per panel, after downsampling
  std::vector<std::size_t> markers;        // vertical lines on the gap panel
  std::string title;
};

/// log10 of the gap is taken at full precision, so gaps far below the
/// double range still plot on a log axis.
std::vector<PlotSample> plot_samples(const Trajectory& traj);

std::string render_svg(const std::vector<PlotSample>& samples,
                       const PlotOptions& options);

}  // namespace optimist
