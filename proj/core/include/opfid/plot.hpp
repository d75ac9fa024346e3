#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace opfid::plot {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
};

enum class YScale { Linear, Log };

struct PlotSpec {
  std::vector<Series> series;
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 900;
  int height = 500;
  YScale y_scale = YScale::Linear;
};

/// Renders a standalone SVG 1.1 document: plot frame, tick labels, one
/// polyline per series, legend. Output bytes are a pure function of the
/// spec. Rejects empty series lists and x/y length mismatches; on a log
/// axis non-positive points are dropped.
std::string render_plot_svg(const PlotSpec& spec);

void render_plot(const PlotSpec& spec, const std::filesystem::path& path);

}  // namespace opfid::plot
