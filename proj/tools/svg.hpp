#pragma once

// Self-contained SVG rendering of a regime grid with a dashed line overlay.

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "clockpt/phase.hpp"

namespace clockpt::cli {

inline constexpr int kSvgWidth = 800;
inline constexpr int kSvgHeight = 600;

inline const char* regime_color(Regime r) {
  switch (r) {
    case Regime::Infeasible: return "#e0e0e0";
    case Regime::NoPT: return "#ffffff";
    case Regime::PTAndRPT: return "#4575b4";
    case Regime::PTNotRPT: return "#d73027";
    case Regime::Critical: return "#fee090";
  }
  return "#000000";
}

struct PlotFrame {
  Range x;  // lambda1
  Range y;  // lambda2
  int margin_left = 70;
  int margin_right = 170;
  int margin_top = 30;
  int margin_bottom = 60;

  double px(double v) const {
    const double w = kSvgWidth - margin_left - margin_right;
    return margin_left + (x.hi == x.lo ? 0.5 : (v - x.lo) / (x.hi - x.lo)) * w;
  }
  double py(double v) const {
    const double h = kSvgHeight - margin_top - margin_bottom;
    return kSvgHeight - margin_bottom - (y.hi == y.lo ? 0.5 : (v - y.lo) / (y.hi - y.lo)) * h;
  }
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// x axis lambda1, y axis lambda2; one rectangle per grid point.
inline std::string render_svg(const std::vector<PhasePoint>& grid, int resolution, const PlotFrame& frame,
                              const std::vector<std::pair<double, double>>& line, const std::string& title) {
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kSvgWidth << "\" height=\""
    << kSvgHeight << "\" viewBox=\"0 0 " << kSvgWidth << ' ' << kSvgHeight << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << kSvgWidth << "\" height=\"" << kSvgHeight << "\" fill=\"#ffffff\"/>\n";

  const double w = static_cast<double>(kSvgWidth - frame.margin_left - frame.margin_right) / resolution;
  const double h = static_cast<double>(kSvgHeight - frame.margin_top - frame.margin_bottom) / resolution;
  s << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const int i = static_cast<int>(k) / resolution;  // lambda1 index -> column
    const int j = static_cast<int>(k) % resolution;  // lambda2 index -> row
    const double x0 = frame.margin_left + i * w;
    const double y0 = kSvgHeight - frame.margin_bottom - (j + 1) * h;
    s << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(w + 0.01) << "\" height=\""
      << num(h + 0.01) << "\" fill=\"" << regime_color(grid[k].regime) << "\"/>\n";
  }
  s << "</g>\n";

  if (line.size() >= 2) {
    s << "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"2\" stroke-dasharray=\"8,5\" points=\"";
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (k) s << ' ';
      s << num(frame.px(line[k].first)) << ',' << num(frame.py(line[k].second));
    }
    s << "\"/>\n";
  }

  const int x_axis = kSvgHeight - frame.margin_bottom;
  const int right = kSvgWidth - frame.margin_right;
  s << "<g stroke=\"#000000\" stroke-width=\"1\">\n"
    << "<line x1=\"" << frame.margin_left << "\" y1=\"" << x_axis << "\" x2=\"" << right << "\" y2=\"" << x_axis
    << "\"/>\n"
    << "<line x1=\"" << frame.margin_left << "\" y1=\"" << frame.margin_top << "\" x2=\"" << frame.margin_left
    << "\" y2=\"" << x_axis << "\"/>\n"
    << "</g>\n";
  s << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#000000\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double vx = frame.x.lo + (frame.x.hi - frame.x.lo) * t / 4.0;
    const double vy = frame.y.lo + (frame.y.hi - frame.y.lo) * t / 4.0;
    s << "<text x=\"" << num(frame.px(vx)) << "\" y=\"" << x_axis + 18 << "\" text-anchor=\"middle\">" << num(vx)
      << "</text>\n";
    s << "<text x=\"" << frame.margin_left - 8 << "\" y=\"" << num(frame.py(vy) + 4) << "\" text-anchor=\"end\">"
      << num(vy) << "</text>\n";
  }
  s << "<text x=\"" << (frame.margin_left + right) / 2 << "\" y=\"" << kSvgHeight - 15
    << "\" text-anchor=\"middle\">lambda1</text>\n"
    << "<text x=\"20\" y=\"" << (frame.margin_top + x_axis) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
    << (frame.margin_top + x_axis) / 2 << ")\">lambda2</text>\n"
    << "<text x=\"" << (frame.margin_left + right) / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";

  const Regime legend[] = {Regime::NoPT, Regime::PTNotRPT, Regime::PTAndRPT, Regime::Critical, Regime::Infeasible};
  int ly = frame.margin_top + 10;
  for (Regime r : legend) {
    s << "<rect x=\"" << right + 20 << "\" y=\"" << ly << "\" width=\"14\" height=\"14\" fill=\"" << regime_color(r)
      << "\" stroke=\"#000000\"/>\n"
      << "<text x=\"" << right + 40 << "\" y=\"" << ly + 12 << "\">" << to_string(r) << "</text>\n";
    ly += 22;
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

}  // namespace clockpt::cli
