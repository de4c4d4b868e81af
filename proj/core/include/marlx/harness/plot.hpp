#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "marlx/harness/train_loop.hpp"

namespace marlx::harness {

/// Eval-curve statistics across seeds: per eval point, the mean and
/// population standard deviation of the per-run eval means.
struct AggregateCurve {
  std::string label;
  std::vector<std::uint64_t> steps;
  std::vector<double> mean;
  std::vector<double> stddev;
};

/// Throws ConfigError if the runs' eval grids are not identical.
AggregateCurve aggregate_runs(const std::vector<RunLog>& runs, const std::string& label);

void write_aggregate_csv(std::ostream& out, const AggregateCurve& curve);
AggregateCurve read_aggregate_csv(std::istream& in, const std::string& label);

struct ReferenceLine {
  double value = 0.0;
  std::string label;
  std::string color = "#888888";
};

struct PlotOptions {
  std::string title;
  std::string x_label = "environment steps";
  std::string y_label = "eval return";
  std::vector<ReferenceLine> reference_lines;
};

/// Line chart with a shaded +-std band per curve, dashed horizontal
/// reference lines, axes and a legend. Pure SVG, no dependencies.
void write_svg_chart(std::ostream& out, const std::vector<AggregateCurve>& curves,
                     const PlotOptions& options);

}  // namespace marlx::harness
