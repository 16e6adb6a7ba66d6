#include "kacring/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "kacring/io.hpp"

namespace kacring::svg {

namespace {

constexpr double kMargin = 50.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Frame {
  double x0, x1, y0, y1;
  double w, h;

  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (w - 2 * kMargin); }
  double py(double y) const { return h - kMargin - (y - y0) / (y1 - y0) * (h - 2 * kMargin); }
};

Frame make_frame(const Chart& c, double x0, double x1, double y0, double y1) {
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  return {x0, x1, y0, y1, double(c.width), double(c.height)};
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string num(double v) { return io::format_double(v); }

void open(std::ostream& out, const Chart& c, const Frame& f) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << c.width << "\" height=\""
      << c.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << c.width / 2 << "\" y=\"20\" text-anchor=\"middle\">" << escape(c.title)
      << "</text>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << num(f.h - kMargin) << "\" x2=\""
      << num(f.w - kMargin) << "\" y2=\"" << num(f.h - kMargin) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\""
      << num(f.h - kMargin) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << c.width / 2 << "\" y=\"" << c.height - 10
      << "\" text-anchor=\"middle\">" << escape(c.x_label) << "</text>\n";
  out << "<text x=\"15\" y=\"" << c.height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << c.height / 2 << ")\">" << escape(c.y_label) << "</text>\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << num(f.h - kMargin + 15)
      << "\" text-anchor=\"middle\">" << num(f.x0) << "</text>\n";
  out << "<text x=\"" << num(f.w - kMargin) << "\" y=\"" << num(f.h - kMargin + 15)
      << "\" text-anchor=\"middle\">" << num(f.x1) << "</text>\n";
  out << "<text x=\"" << kMargin - 5 << "\" y=\"" << num(f.h - kMargin)
      << "\" text-anchor=\"end\">" << num(f.y0) << "</text>\n";
  out << "<text x=\"" << kMargin - 5 << "\" y=\"" << kMargin + 4 << "\" text-anchor=\"end\">"
      << num(f.y1) << "</text>\n";
}

}  // namespace

void line_chart(std::ostream& out, const Chart& chart, const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = 0.0, y1 = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (double v : s.x) { x0 = std::min(x0, v); x1 = std::max(x1, v); }
    for (double v : s.y) { y0 = std::min(y0, v); y1 = std::max(y1, v); }
  }
  if (!std::isfinite(x0)) { x0 = 0.0; x1 = 1.0; y1 = 1.0; }
  const Frame f = make_frame(chart, x0, x1, y0, y1);
  open(out, chart, f);
  std::size_t k = 0;
  for (const auto& s : series) {
    const char* colour = kPalette[k++ % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << (i ? " " : "") << num(f.px(s.x[i])) << ',' << num(f.py(s.y[i]));
    }
    out << "\"/>\n";
    if (!s.label.empty()) {
      out << "<text x=\"" << num(f.w - kMargin + 2) << "\" y=\"" << kMargin + 14 * double(k)
          << "\" fill=\"" << colour << "\">" << escape(s.label) << "</text>\n";
    }
  }
  out << "</svg>\n";
}

void bar_chart(std::ostream& out, const Chart& chart, const std::vector<double>& x,
               const std::vector<double>& heights) {
  double x0 = 0.0, x1 = 1.0, y1 = 1.0;
  if (!x.empty()) {
    x0 = *std::min_element(x.begin(), x.end()) - 0.5;
    x1 = *std::max_element(x.begin(), x.end()) + 0.5;
  }
  if (!heights.empty()) y1 = *std::max_element(heights.begin(), heights.end());
  const Frame f = make_frame(chart, x0, x1, 0.0, y1);
  open(out, chart, f);
  const double bar = std::max(1.0, (f.px(1.0) - f.px(0.0)) * 0.8);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double top = f.py(heights[i]);
    out << "<rect x=\"" << num(f.px(x[i]) - bar / 2) << "\" y=\"" << num(top) << "\" width=\""
        << num(bar) << "\" height=\"" << num(f.py(0.0) - top) << "\" fill=\"" << kPalette[0]
        << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace kacring::svg
