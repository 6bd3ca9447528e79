#include "optimist/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace optimist {

namespace {

constexpr double kPanel = 360;
constexpr double kMargin = 50;
constexpr double kWidth = 2 * kPanel + 3 * kMargin;
constexpr double kHeight = kPanel + 2 * kMargin;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Keeps the first and last samples and, per bucket, the samples with the
// smallest and largest plotted value so peaks survive.
template <typename Value>
std::vector<std::size_t> downsample(std::size_t n, std::size_t limit, Value value) {
  std::vector<std::size_t> keep;
  if (n <= limit || limit < 4) {
    for (std::size_t i = 0; i < n; ++i) keep.push_back(i);
    return keep;
  }
  const std::size_t buckets = limit / 2;
  for (std::size_t b = 0; b < buckets; ++b) {
    const std::size_t lo = b * n / buckets;
    const std::size_t hi = std::max(lo + 1, (b + 1) * n / buckets);
    std::size_t imin = lo;
    std::size_t imax = lo;
    for (std::size_t i = lo; i < hi; ++i) {
      if (value(i) < value(imin)) imin = i;
      if (value(i) > value(imax)) imax = i;
    }
    keep.push_back(std::min(imin, imax));
    if (imin != imax) keep.push_back(std::max(imin, imax));
  }
  if (keep.front() != 0) keep.insert(keep.begin(), 0);
  if (keep.back() != n - 1) keep.push_back(n - 1);
  return keep;
}

void axes(std::ostringstream& out, double x0, const std::string& xlabel,
          const std::string& ylabel, const std::string& xlo, const std::string& xhi,
          const std::string& ylo, const std::string& yhi) {
  const double y0 = kMargin;
  out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(kPanel)
      << "\" height=\"" << num(kPanel) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << num(x0 + kPanel / 2) << "\" y=\"" << num(y0 + kPanel + 35)
      << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
  out << "<text x=\"" << num(x0 - 35) << "\" y=\"" << num(y0 + kPanel / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << num(x0 - 35) << ' '
      << num(y0 + kPanel / 2) << ")\">" << escape(ylabel) << "</text>\n";
  out << "<text x=\"" << num(x0) << "\" y=\"" << num(y0 + kPanel + 15)
      << "\" font-size=\"10\">" << escape(xlo) << "</text>\n";
  out << "<text x=\"" << num(x0 + kPanel) << "\" y=\"" << num(y0 + kPanel + 15)
      << "\" font-size=\"10\" text-anchor=\"end\">" << escape(xhi) << "</text>\n";
  out << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(y0 + kPanel)
      << "\" font-size=\"10\" text-anchor=\"end\">" << escape(ylo) << "</text>\n";
  out << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(y0 + 10)
      << "\" font-size=\"10\" text-anchor=\"end\">" << escape(yhi) << "</text>\n";
}

}  // namespace

std::vector<PlotSample> plot_samples(const Trajectory& traj) {
  std::vector<PlotSample> out;
  out.reserve(traj.size());
  for (const Record& r : traj.records()) {
    std::optional<double> lg;
    if (r.gap > 0) lg = (log(r.gap) / log(like(r.gap, 10))).to_double();
    out.push_back(PlotSample{static_cast<double>(r.t), r.x[0].to_double(),
                             r.y[0].to_double(), r.gap.to_double(), lg});
  }
  return out;
}

std::string render_svg(const std::vector<PlotSample>& samples,
                       const PlotOptions& options) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth)
      << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' '
      << num(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    out << "<text x=\"" << num(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\">"
        << escape(options.title) << "</text>\n";
  }

  // Left panel: iterate path.
  const double left = kMargin;
  axes(out, left, "x[1]", "y[1]", "0", "1", "0", "1");
  if (!samples.empty()) {
    const auto path_keep = downsample(samples.size(), options.max_points,
                                      [&](std::size_t i) { return samples[i].x1; });
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
    for (std::size_t i : path_keep) {
      out << num(left + samples[i].x1 * kPanel) << ','
          << num(kMargin + (1 - samples[i].y1) * kPanel) << ' ';
    }
    out << "\"/>\n";
    const PlotSample& s0 = samples.front();
    out << "<circle cx=\"" << num(left + s0.x1 * kPanel) << "\" cy=\""
        << num(kMargin + (1 - s0.y1) * kPanel) << "\" r=\"3\" fill=\"green\"/>\n";
  }

  // Right panel: gap against t.
  const double right = 2 * kMargin + kPanel;
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!options.log_gap || samples[i].log10_gap) usable.push_back(i);
  }
  const auto gap_value = [&](std::size_t k) {
    const PlotSample& s = samples[usable[k]];
    return options.log_gap ? *s.log10_gap : s.gap;
  };
  double tmin = samples.empty() ? 1 : samples.front().t;
  double tmax = samples.empty() ? 1 : samples.back().t;
  if (tmax <= tmin) tmax = tmin + 1;
  double vmin = options.log_gap ? std::numeric_limits<double>::infinity() : 0;
  double vmax = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < usable.size(); ++k) {
    vmin = std::min(vmin, gap_value(k));
    vmax = std::max(vmax, gap_value(k));
  }
  if (usable.empty()) {
    vmin = 0;
    vmax = 1;
  }
  if (vmax <= vmin) vmax = vmin + 1;
  const auto fmt = [&](double v) {
    std::ostringstream s;
    s.precision(3);
    if (options.log_gap) s << "1e" << std::lround(v);
    else s << v;
    return s.str();
  };
  axes(out, right, "t", options.log_gap ? "gap (log scale)" : "gap",
       std::to_string(static_cast<long long>(tmin)),
       std::to_string(static_cast<long long>(tmax)), fmt(vmin), fmt(vmax));
  const auto px = [&](double t) { return right + (t - tmin) / (tmax - tmin) * kPanel; };
  const auto py = [&](double v) { return kMargin + (1 - (v - vmin) / (vmax - vmin)) * kPanel; };
  for (std::size_t m : options.markers) {
    const double t = static_cast<double>(m);
    if (t < tmin || t > tmax) continue;
    out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(kMargin) << "\" x2=\""
        << num(px(t)) << "\" y2=\"" << num(kMargin + kPanel)
        << "\" stroke=\"crimson\" stroke-dasharray=\"4 3\"/>\n";
  }
  if (!usable.empty()) {
    const auto keep = downsample(usable.size(), options.max_points, gap_value);
    out << "<polyline fill=\"none\" stroke=\"darkorange\" stroke-width=\"1\" points=\"";
    for (std::size_t k : keep) {
      out << num(px(samples[usable[k]].t)) << ',' << num(py(gap_value(k))) << ' ';
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace optimist
