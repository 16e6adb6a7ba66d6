#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kacring::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 400;
};

/// Static SVG with one polyline per series. Output depends only on the inputs.
void line_chart(std::ostream& out, const Chart& chart, const std::vector<Series>& series);

/// Static SVG bar chart; bars are centred on x.
void bar_chart(std::ostream& out, const Chart& chart, const std::vector<double>& x,
               const std::vector<double>& heights);

}  // namespace kacring::svg
