#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hypbo {

struct PlotSeries {
  std::string name;
  std::vector<double> mean;
  std::vector<double> spread;  ///< half-width of the shaded band; may be empty
};

struct PlotOptions {
  std::string title;
  std::string x_label = "iteration";
  std::string y_label;
  int width = 720;
  int height = 440;
};

/// Self-contained SVG: one polyline per series over x = 1..len, a shaded
/// mean +/- spread band, axis ticks and a legend.
[[nodiscard]] std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& options);
void write_svg(const std::filesystem::path& path, const std::vector<PlotSeries>& series, const PlotOptions& options);

}  // namespace hypbo
