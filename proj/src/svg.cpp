#include "carnot/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace carnot {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string palette(int i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
                                 "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
                                 "#8c6d31", "#843c39", "#7b4173", "#3182bd"};
  return colors[static_cast<unsigned>(i) % 16];
}

std::string render_svg(const std::vector<SvgSeries>& series, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, bool log_x, bool log_y, int width, int height) {
  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!log_x || x > 0) && (!log_y || y > 0);
  };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;

  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + ph - (ty(v) - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0, fy = y0 + (y1 - y0) * k / 4.0;
    const double X = left + pw * k / 4.0, Y = top + ph - ph * k / 4.0;
    os << "<text x=\"" << fmt(X) << "\" y=\"" << fmt(top + ph + 16) << "\" text-anchor=\"middle\" font-size=\"11\">"
       << tick(log_x ? std::pow(10.0, fx) : fx) << "</text>\n";
    os << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(Y + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
       << tick(log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  os << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
     << escape(xlabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
     << fmt(top + ph / 2) << ")\">" << escape(ylabel) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const std::string color = s.color.empty() ? palette(static_cast<int>(k)) : s.color;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.line) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < n; ++i)
        if (usable(s.x[i], s.y[i])) os << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
      os << "\"/>\n";
    } else {
      os << "<g fill=\"" << color << "\">\n";
      for (std::size_t i = 0; i < n; ++i)
        if (usable(s.x[i], s.y[i]))
          os << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\"" << fmt(s.radius)
             << "\"/>\n";
      os << "</g>\n";
    }
    if (!s.label.empty()) {
      const double ly = top + 14 + 14.0 * static_cast<double>(k);
      os << "<rect x=\"" << fmt(left + pw - 120) << "\" y=\"" << fmt(ly - 8) << "\" width=\"8\" height=\"8\" fill=\""
         << color << "\"/>\n";
      os << "<text x=\"" << fmt(left + pw - 108) << "\" y=\"" << fmt(ly) << "\" font-size=\"11\">" << escape(s.label)
         << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace carnot
