#include "forwardcf/svg.hpp"

#include "forwardcf/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace forwardcf::svg {

namespace {

constexpr double kMarginLeft = 64;
constexpr double kMarginRight = 150;
constexpr double kMarginTop = 36;
constexpr double kMarginBottom = 48;

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

// Ticks at 1, 2 or 5 times a power of ten.
double tick_step(double span) {
  if (!(span > 0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  return colors[i % (sizeof colors / sizeof *colors)];
}

void write_plot(std::ostream& out, const std::vector<Series>& series, const PlotOptions& o) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double pw = o.width - kMarginLeft - kMarginRight;
  const double ph = o.height - kMarginTop - kMarginBottom;
  auto sx = [&](double x) { return kMarginLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kMarginTop + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(o.width) << "\" height=\""
      << num(o.height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(o.width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
      << escape(o.title) << "</text>\n";
  out << "<rect x=\"" << num(kMarginLeft) << "\" y=\"" << num(kMarginTop) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double xs = tick_step(xmax - xmin);
  for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-12; t += xs) {
    out << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(kMarginTop + ph) << "\" x2=\"" << num(sx(t))
        << "\" y2=\"" << num(kMarginTop + ph + 4) << "\" stroke=\"black\"/>"
        << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(kMarginTop + ph + 16)
        << "\" text-anchor=\"middle\">" << format_decimal(std::round(t / xs) * xs) << "</text>\n";
  }
  const double ys = tick_step(ymax - ymin);
  for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-12; t += ys) {
    out << "<line x1=\"" << num(kMarginLeft - 4) << "\" y1=\"" << num(sy(t)) << "\" x2=\""
        << num(kMarginLeft) << "\" y2=\"" << num(sy(t)) << "\" stroke=\"black\"/>"
        << "<text x=\"" << num(kMarginLeft - 6) << "\" y=\"" << num(sy(t) + 4)
        << "\" text-anchor=\"end\">" << format_decimal(std::round(t / ys) * ys) << "</text>\n";
  }
  out << "<text x=\"" << num(kMarginLeft + pw / 2) << "\" y=\"" << num(o.height - 10)
      << "\" text-anchor=\"middle\">" << escape(o.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << num(kMarginTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(kMarginTop + ph / 2) << ")\">" << escape(o.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const std::size_t len = std::min(s.x.size(), s.y.size());
    if (s.points) {
      out << "<g fill=\"" << s.color << "\" fill-opacity=\"0.5\">";
      for (std::size_t i = 0; i < len; ++i) {
        out << "<circle cx=\"" << num(sx(s.x[i])) << "\" cy=\"" << num(sy(s.y[i])) << "\" r=\"1.5\"/>";
      }
      out << "</g>\n";
    } else {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
          << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
      for (std::size_t i = 0; i < len; ++i) {
        out << num(sx(s.x[i])) << ',' << num(sy(s.y[i])) << (i + 1 < len ? " " : "");
      }
      out << "\"/>\n";
    }
    const double ly = kMarginTop + 14 + 16 * static_cast<double>(k);
    const double lx = kMarginLeft + pw + 10;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 18) << "\" y2=\""
        << num(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
        << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>"
        << "<text x=\"" << num(lx + 24) << "\" y=\"" << num(ly) << "\">" << escape(s.label)
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace forwardcf::svg
