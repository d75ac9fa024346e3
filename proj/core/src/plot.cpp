#include "opfid/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "opfid/csv.hpp"

namespace opfid::plot {

namespace {

// Compact coordinate/label formatting: deterministic, no trailing zeros.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(std::abs(lo), 1.0) * 0.5;
    return {lo - pad, hi + pad};
  }
  const double pad = 0.04 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::vector<double> linear_ticks(double lo, double hi, int target) {
  const double raw = (hi - lo) / std::max(target, 2);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = 10.0 * mag;
  for (double mult : {1.0, 2.0, 5.0}) {
    if (raw <= mult * mag) {
      step = mult * mag;
      break;
    }
  }
  std::vector<double> ticks;
  double v = std::ceil(lo / step) * step;
  for (; v <= hi + 0.5 * step; v += step) {
    ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return ticks;
}

std::vector<double> decade_ticks(double lo_log, double hi_log) {
  std::vector<double> ticks;
  for (double e = std::ceil(lo_log); e <= std::floor(hi_log) + 1e-9; e += 1.0) {
    ticks.push_back(e);
  }
  if (ticks.empty()) ticks = {lo_log, hi_log};
  return ticks;
}

}  // namespace

std::string render_plot_svg(const PlotSpec& spec) {
  if (spec.series.empty()) throw std::invalid_argument("render_plot: no series");
  if (spec.width < 100 || spec.height < 100) {
    throw std::invalid_argument("render_plot: canvas too small");
  }

  const bool log_y = spec.y_scale == YScale::Log;
  struct Point {
    double x, y;
  };
  std::vector<std::vector<Point>> data;
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;

  for (const Series& s : spec.series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw std::invalid_argument("render_plot: series must be non-empty with matching x/y sizes");
    }
    std::vector<Point> pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double y = s.y[i];
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      if (log_y) {
        if (y <= 0.0) continue; // not representable on a log axis
        y = std::log10(y);
      }
      pts.push_back({s.x[i], y});
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
    data.push_back(std::move(pts));
  }
  if (!std::isfinite(x_min) || !std::isfinite(y_min)) {
    throw std::invalid_argument("render_plot: no plottable points");
  }

  const Range xr = padded(x_min, x_max);
  const Range yr = padded(y_min, y_max);

  const double ml = 70.0, mr = 20.0, mt = spec.title.empty() ? 16.0 : 36.0, mb = 52.0;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;
  auto map_x = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto map_y = [&](double y) { return mt + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(spec.width) + "\" height=\"" + std::to_string(spec.height) + "\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (!spec.title.empty()) {
    svg += "  <text x=\"" + fmt(ml + pw / 2) +
           "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           xml_escape(spec.title) + "</text>\n";
  }

  // Frame and ticks.
  svg += "  <rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(pw) +
         "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  svg += "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (double tx : linear_ticks(xr.lo, xr.hi, 8)) {
    const double sx = map_x(tx);
    svg += "    <line x1=\"" + fmt(sx) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(sx) +
           "\" y2=\"" + fmt(mt + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "    <text x=\"" + fmt(sx) + "\" y=\"" + fmt(mt + ph + 18) +
           "\" text-anchor=\"middle\">" + fmt(tx) + "</text>\n";
  }
  const std::vector<double> y_ticks =
      log_y ? decade_ticks(yr.lo, yr.hi) : linear_ticks(yr.lo, yr.hi, 6);
  for (double ty : y_ticks) {
    const double sy = map_y(ty);
    if (sy < mt - 1e-9 || sy > mt + ph + 1e-9) continue;
    svg += "    <line x1=\"" + fmt(ml - 5) + "\" y1=\"" + fmt(sy) + "\" x2=\"" + fmt(ml) +
           "\" y2=\"" + fmt(sy) + "\" stroke=\"black\"/>\n";
    const std::string label = log_y ? "1e" + fmt(ty) : fmt(ty);
    svg += "    <text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(sy + 4) + "\" text-anchor=\"end\">" +
           label + "</text>\n";
  }
  svg += "  </g>\n";

  if (!spec.x_label.empty()) {
    svg += "  <text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(spec.height - 12.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           xml_escape(spec.x_label) + "</text>\n";
  }
  if (!spec.y_label.empty()) {
    svg += "  <text x=\"16\" y=\"" + fmt(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
           fmt(mt + ph / 2) + ")\">" + xml_escape(spec.y_label) + "</text>\n";
  }

  for (std::size_t si = 0; si < data.size(); ++si) {
    if (data[si].empty()) continue;
    std::string points;
    for (const Point& p : data[si]) {
      if (!points.empty()) points += ' ';
      points += fmt(map_x(p.x)) + "," + fmt(map_y(p.y));
    }
    svg += "  <polyline fill=\"none\" stroke=\"" +
           std::string(kPalette[si % kPaletteSize]) + "\" stroke-width=\"1.5\" points=\"" +
           points + "\"/>\n";
  }

  // Legend, top-right inside the frame.
  double ly = mt + 14.0;
  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    if (spec.series[si].label.empty()) continue;
    const double lx = ml + pw - 150.0;
    svg += "  <line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" + fmt(lx + 22) +
           "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + kPalette[si % kPaletteSize] +
           "\" stroke-width=\"1.5\"/>\n";
    svg += "  <text x=\"" + fmt(lx + 28) + "\" y=\"" + fmt(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + xml_escape(spec.series[si].label) +
           "</text>\n";
    ly += 15.0;
  }

  svg += "</svg>\n";
  return svg;
}

void render_plot(const PlotSpec& spec, const std::filesystem::path& path) {
  csv::write_text(path, render_plot_svg(spec));
}

}  // namespace opfid::plot
