#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace kncli::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
  /// Horizontal reference lines, drawn dashed.
  std::vector<double> y_marks;
};

/// values[row * cols + col]; rows follow `y`, columns follow `x`. NaN cells
/// are drawn grey. The color scale is log10 of the value, centered on
/// `contour_level`, which is also traced as a dashed contour.
struct HeatMap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> values;
  double contour_level = 1.0;
};

void write(const std::filesystem::path& path, const LinePlot& plot);
void write(const std::filesystem::path& path, const HeatMap& map);

}  // namespace kncli::svg
