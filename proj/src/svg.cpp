#include "famapf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace famapf {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

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

std::string cost_colour(double c) {
  c = std::clamp(c, 0.0, 1.0);
  const int g = static_cast<int>(std::lround(220.0 * (1.0 - c)));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", 230, g, g);
  return buf;
}

struct Frame {
  double w = 640, h = 400, left = 70, right = 20, top = 40, bottom = 60;
  double plot_w() const { return w - left - right; }
  double plot_h() const { return h - top - bottom; }
};

double nice_max(double v) {
  if (!(v > 0.0)) return 1.0;
  const double p = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * p >= v) return m * p;
  }
  return 10.0 * p;
}

void axes(std::ostringstream& os, const Frame& f, const std::string& title, double y_max,
          const std::string& y_label) {
  os << "<text x=\"" << num(f.w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << escape(title) << "</text>\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = f.top + f.plot_h() * (1.0 - i / 5.0);
    os << "<line x1=\"" << num(f.left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(f.w - f.right)
       << "\" y2=\"" << num(y) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << num(f.left - 6) << "\" y=\"" << num(y + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">" << num(y_max * i / 5.0) << "</text>\n";
  }
  os << "<text x=\"16\" y=\"" << num(f.top + f.plot_h() / 2) << "\" font-size=\"12\" transform=\"rotate(-90 16 "
     << num(f.top + f.plot_h() / 2) << ")\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
}

void legend(std::ostringstream& os, const Frame& f, const std::vector<Series>& series) {
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double x = f.left + 120.0 * static_cast<double>(s);
    os << "<rect x=\"" << num(x) << "\" y=\"" << num(f.h - 18) << "\" width=\"10\" height=\"10\" fill=\""
       << kPalette[s % 6] << "\"/>\n";
    os << "<text x=\"" << num(x + 14) << "\" y=\"" << num(f.h - 9) << "\" font-size=\"11\">"
       << escape(series[s].name) << "</text>\n";
  }
}

std::string open_svg(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" font-family=\"sans-serif\">\n";
}

}  // namespace

std::string guidance_svg(const GuidanceGraph& gg, int cell_px) {
  const GridMap& map = gg.map();
  const double c = cell_px;
  std::ostringstream os;
  os << open_svg(map.width() * c, map.height() * c);
  for (int v = 0; v < map.size(); ++v) {
    const Vertex p = map.vertex(v);
    os << "<rect x=\"" << num(p.x * c) << "\" y=\"" << num(p.y * c) << "\" width=\"" << num(c)
       << "\" height=\"" << num(c) << "\" fill=\"" << (map.passable(v) ? "#ffffff" : "#333333")
       << "\" stroke=\"#eeeeee\"/>\n";
  }
  for (int v = 0; v < map.size(); ++v) {
    if (!map.passable(v)) continue;
    const Vertex p = map.vertex(v);
    const double cx = (p.x + 0.5) * c;
    const double cy = (p.y + 0.5) * c;
    for (Action a : kMoveActions) {
      if (!gg.has_edge(v, a)) continue;
      const Vertex q = step(Vertex{0, 0}, a);
      const double ex = cx + q.x * c * 0.42;
      const double ey = cy + q.y * c * 0.42;
      os << "<line x1=\"" << num(cx) << "\" y1=\"" << num(cy) << "\" x2=\"" << num(ex) << "\" y2=\""
         << num(ey) << "\" stroke=\"" << cost_colour(gg.flow_cost(v, a))
         << "\" stroke-width=\"" << num(std::max(1.0, c / 8)) << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                          const std::vector<Series>& series, const std::string& y_label) {
  Frame f;
  double y_max = 0.0;
  for (const Series& s : series) {
    for (double v : s.values) y_max = std::max(y_max, v);
  }
  y_max = nice_max(y_max);
  std::ostringstream os;
  os << open_svg(f.w, f.h);
  axes(os, f, title, y_max, y_label);
  const double group = f.plot_w() / std::max<std::size_t>(1, categories.size());
  const double bar = group * 0.8 / std::max<std::size_t>(1, series.size());
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = f.left + group * static_cast<double>(c) + group * 0.1;
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = c < series[s].values.size() ? series[s].values[c] : 0.0;
      const double h = f.plot_h() * v / y_max;
      os << "<rect x=\"" << num(gx + bar * static_cast<double>(s)) << "\" y=\"" << num(f.top + f.plot_h() - h)
         << "\" width=\"" << num(bar) << "\" height=\"" << num(h) << "\" fill=\"" << kPalette[s % 6]
         << "\"/>\n";
    }
    os << "<text x=\"" << num(gx + group * 0.4) << "\" y=\"" << num(f.top + f.plot_h() + 16)
       << "\" text-anchor=\"middle\" font-size=\"11\">" << escape(categories[c]) << "</text>\n";
  }
  legend(os, f, series);
  os << "</svg>\n";
  return os.str();
}

std::string line_chart_svg(const std::string& title, const std::vector<double>& xs,
                           const std::vector<Series>& series, const std::string& x_label,
                           const std::string& y_label) {
  Frame f;
  double y_max = 0.0;
  for (const Series& s : series) {
    for (double v : s.values) y_max = std::max(y_max, v);
  }
  y_max = nice_max(y_max);
  const double x_min = xs.empty() ? 0.0 : *std::min_element(xs.begin(), xs.end());
  double x_max = xs.empty() ? 1.0 : *std::max_element(xs.begin(), xs.end());
  if (x_max <= x_min) x_max = x_min + 1.0;
  auto px = [&](double x) { return f.left + f.plot_w() * (x - x_min) / (x_max - x_min); };
  auto py = [&](double y) { return f.top + f.plot_h() * (1.0 - y / y_max); };
  std::ostringstream os;
  os << open_svg(f.w, f.h);
  axes(os, f, title, y_max, y_label);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    os << "<text x=\"" << num(px(xs[i])) << "\" y=\"" << num(f.top + f.plot_h() + 16)
       << "\" text-anchor=\"middle\" font-size=\"11\">" << num(xs[i]) << "</text>\n";
  }
  os << "<text x=\"" << num(f.left + f.plot_w() / 2) << "\" y=\"" << num(f.top + f.plot_h() + 34)
     << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(x_label) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size() && i < series[s].values.size(); ++i) {
      pts += num(px(xs[i])) + "," + num(py(series[s].values[i])) + " ";
    }
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[s % 6] << "\" stroke-width=\"2\" points=\""
       << pts << "\"/>\n";
  }
  legend(os, f, series);
  os << "</svg>\n";
  return os.str();
}

}  // namespace famapf
