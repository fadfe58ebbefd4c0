#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace forwardcf::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
  bool points = false;  // markers instead of a polyline
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  double width = 640;
  double height = 420;
};

/// Axes, tick labels, one polyline (or marker set) per series and a legend.
void write_plot(std::ostream& out, const std::vector<Series>& series, const PlotOptions& options);

/// Colour for the i-th series of a plot.
std::string palette(std::size_t i);

}  // namespace forwardcf::svg
