#pragma once

#include <string>
#include <vector>

namespace carnot {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;
  bool line = false;
  double radius = 1.2;
};

/// Distinct colors for series index i.
std::string palette(int i);

/// Scatter or line plot with axes and a legend. Non-positive values are
/// dropped on log axes.
std::string render_svg(const std::vector<SvgSeries>& series, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, bool log_x = false, bool log_y = false, int width = 640,
                       int height = 480);

}  // namespace carnot
