#pragma once

#include <string>
#include <vector>

namespace staforge::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  /// Draw markers instead of a polyline.
  bool markers = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  /// Equal scaling on both axes (phase-space plots).
  bool equal_aspect = false;
};

/// Static SVG with axes, ticks and a legend.
std::string render(const Plot& plot, int width = 720, int height = 480);

}  // namespace staforge::svg
