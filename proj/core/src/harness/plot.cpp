#include "marlx/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "marlx/errors.hpp"

namespace marlx::harness {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

AggregateCurve aggregate_runs(const std::vector<RunLog>& runs, const std::string& label) {
  if (runs.empty()) throw ConfigError("aggregate_runs: no runs");
  AggregateCurve curve;
  curve.label = label;
  const std::size_t n_points = runs.front().records.size();
  for (const RunLog& run : runs) {
    if (run.records.size() != n_points)
      throw ConfigError("aggregate_runs: eval grids differ in length (" +
                        std::to_string(run.records.size()) + " vs " + std::to_string(n_points) +
                        " points); runs must share run.eval_interval and run.total_steps");
  }
  for (std::size_t k = 0; k < n_points; ++k) {
    std::uint64_t step = runs.front().records[k].env_steps;
    for (const RunLog& run : runs)
      if (run.records[k].env_steps != step)
        throw ConfigError("aggregate_runs: eval grids differ at point " + std::to_string(k) +
                          "; runs must share run.eval_interval");
    double mean = 0.0;
    for (const RunLog& run : runs) mean += run.records[k].eval_mean;
    mean /= static_cast<double>(runs.size());
    double ss = 0.0;
    for (const RunLog& run : runs) {
      double d = run.records[k].eval_mean - mean;
      ss += d * d;
    }
    curve.steps.push_back(step);
    curve.mean.push_back(mean);
    curve.stddev.push_back(std::sqrt(ss / static_cast<double>(runs.size())));
  }
  return curve;
}

void write_aggregate_csv(std::ostream& out, const AggregateCurve& curve) {
  out << "# marlx-aggregate v1\n";
  out << "env_steps,mean,std\n";
  for (std::size_t k = 0; k < curve.steps.size(); ++k)
    out << curve.steps[k] << ',' << fmt17(curve.mean[k]) << ',' << fmt17(curve.stddev[k]) << '\n';
}

AggregateCurve read_aggregate_csv(std::istream& in, const std::string& label) {
  AggregateCurve curve;
  curve.label = label;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.find("env_steps") == 0) continue;
    char* p = nullptr;
    curve.steps.push_back(std::strtoull(line.c_str(), &p, 10));
    curve.mean.push_back(std::strtod(p + 1, &p));
    curve.stddev.push_back(std::strtod(p + 1, &p));
  }
  return curve;
}

void write_svg_chart(std::ostream& out, const std::vector<AggregateCurve>& curves,
                     const PlotOptions& options) {
  if (curves.empty()) throw ConfigError("write_svg_chart: no curves");

  const double width = 760, height = 480;
  const double ml = 70, mr = 20, mt = 36, mb = 52;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const AggregateCurve& c : curves) {
    for (std::size_t k = 0; k < c.steps.size(); ++k) {
      double x = static_cast<double>(c.steps[k]);
      double lo = c.mean[k] - c.stddev[k];
      double hi = c.mean[k] + c.stddev[k];
      if (first) {
        xmin = xmax = x;
        ymin = lo;
        ymax = hi;
        first = false;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, lo);
        ymax = std::max(ymax, hi);
      }
    }
  }
  for (const ReferenceLine& rl : options.reference_lines) {
    ymin = std::min(ymin, rl.value);
    ymax = std::max(ymax, rl.value);
  }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return mt + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
      << options.title << "</text>\n";

  // axes and ticks
  out << "<g stroke=\"#333\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\"/>\n</g>\n";
  for (int i = 0; i <= 5; ++i) {
    double xv = xmin + (xmax - xmin) * i / 5.0;
    double yv = ymin + (ymax - ymin) * i / 5.0;
    out << "<text x=\"" << sx(xv) << "\" y=\"" << mt + ph + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt2(xv) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << sy(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt2(yv) << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << sy(yv) << "\" x2=\"" << ml + pw << "\" y2=\""
        << sy(yv) << "\" stroke=\"#eee\"/>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << options.x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " << mt + ph / 2
      << ")\">" << options.y_label << "</text>\n";

  for (const ReferenceLine& rl : options.reference_lines) {
    out << "<line x1=\"" << ml << "\" y1=\"" << sy(rl.value) << "\" x2=\"" << ml + pw << "\" y2=\""
        << sy(rl.value) << "\" stroke=\"" << rl.color << "\" stroke-dasharray=\"6 4\"/>\n";
    out << "<text x=\"" << ml + pw - 4 << "\" y=\"" << sy(rl.value) - 4
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << rl.color << "\">" << rl.label
        << "</text>\n";
  }

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const AggregateCurve& c = curves[ci];
    const char* color = kPalette[ci % (sizeof kPalette / sizeof kPalette[0])];
    if (c.steps.empty()) continue;
    out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
    for (std::size_t k = 0; k < c.steps.size(); ++k)
      out << sx(static_cast<double>(c.steps[k])) << ',' << sy(c.mean[k] + c.stddev[k]) << ' ';
    for (std::size_t k = c.steps.size(); k-- > 0;)
      out << sx(static_cast<double>(c.steps[k])) << ',' << sy(c.mean[k] - c.stddev[k]) << ' ';
    out << "\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t k = 0; k < c.steps.size(); ++k)
      out << sx(static_cast<double>(c.steps[k])) << ',' << sy(c.mean[k]) << ' ';
    out << "\"/>\n";
    double ly = mt + 16 + 16 * static_cast<double>(ci);
    out << "<line x1=\"" << ml + 10 << "\" y1=\"" << ly << "\" x2=\"" << ml + 34 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << ml + 40 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << c.label
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace marlx::harness
