#include "fluxlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "fluxlab/error.hpp"

namespace fluxlab::svg {

namespace {

constexpr double W = 640, H = 480, L = 70, R = 20, T = 40, B = 55;

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return L + (x - x0) / (x1 - x0) * (W - L - R); }
  double py(double y) const { return H - B - (y - y0) / (y1 - y0) * (H - T - B); }
};

void header(std::ostringstream& os) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes(std::ostringstream& os, const Frame& fr, const Axes& ax) {
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = fr.x0 + (fr.x1 - fr.x0) * i / 4.0;
    const double yv = fr.y0 + (fr.y1 - fr.y0) * i / 4.0;
    os << "<text x=\"" << f2(fr.px(xv)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << tick(xv)
       << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << f2(fr.py(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << T - 14 << "\" text-anchor=\"middle\" font-size=\"14\">" << esc(ax.title)
     << "</text>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << esc(ax.xlabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << H / 2 << ")\">"
     << esc(ax.ylabel) << "</text>\n";
}

void polyline(std::ostringstream& os, const Frame& fr, const Series& s) {
  std::string pts;
  auto flush = [&]() {
    if (pts.empty()) return;
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
       << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"" << pts << "\"/>\n";
    pts.clear();
  };
  for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
    if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
      flush();
      continue;
    }
    pts += f2(fr.px(s.x[i])) + "," + f2(fr.py(s.y[i])) + " ";
  }
  flush();
}

void legend(std::ostringstream& os, const std::vector<Series>& series) {
  double y = T + 16;
  for (const auto& s : series) {
    if (s.label.empty()) continue;
    os << "<line x1=\"" << W - R - 150 << "\" y1=\"" << y - 4 << "\" x2=\"" << W - R - 125 << "\" y2=\"" << y - 4
       << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R - 120 << "\" y=\"" << y << "\">" << esc(s.label) << "</text>\n";
    y += 16;
  }
}

Frame bounds(const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!std::isfinite(x0)) return {0, 1, 0, 1};
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  return {x0, x1, y0 - pad, y1 + pad};
}

// Perceptually ordered dark-to-bright ramp.
std::string colour(double u) {
  u = std::clamp(u, 0.0, 1.0);
  const double r = std::clamp(1.6 * u - 0.1, 0.0, 1.0);
  const double g = std::clamp(1.4 * u * u, 0.0, 1.0);
  const double b = std::clamp(0.5 + 1.5 * u * (1 - u) - 0.4 * u, 0.0, 1.0);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(r * 255), static_cast<int>(g * 255),
                static_cast<int>(b * 255));
  return buf;
}

}  // namespace

std::string heatmap(const std::vector<std::vector<double>>& values, double x0, double x1, double t0, double t1,
                    const Axes& ax, const std::vector<Series>& overlays) {
  std::ostringstream os;
  header(os);
  const Frame fr{x0, x1, t0, t1};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& row : values)
    for (double v : row)
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (!(hi > lo)) hi = lo + 1.0;
  const std::size_t rows = values.size();
  // Down-sample to at most ~300 x 240 cells to keep files small.
  const std::size_t rstep = std::max<std::size_t>(1, rows / 240);
  for (std::size_t r = 0; r < rows; r += rstep) {
    const std::size_t cols = values[r].size();
    const std::size_t cstep = std::max<std::size_t>(1, cols / 300);
    const double ta = rows > 1 ? t0 + (t1 - t0) * r / (rows - 1) : t0;
    const double tb = rows > 1 ? t0 + (t1 - t0) * std::min(r + rstep, rows - 1) / (rows - 1) : t1;
    for (std::size_t c = 0; c < cols; c += cstep) {
      const double xa = cols > 1 ? x0 + (x1 - x0) * c / (cols - 1) : x0;
      const double xb = cols > 1 ? x0 + (x1 - x0) * std::min(c + cstep, cols - 1) / (cols - 1) : x1;
      const double u = (values[r][c] - lo) / (hi - lo);
      os << "<rect x=\"" << f2(fr.px(xa)) << "\" y=\"" << f2(fr.py(std::max(tb, ta + 1e-12))) << "\" width=\""
         << f2(std::max(fr.px(xb) - fr.px(xa), 0.5) + 0.3) << "\" height=\""
         << f2(std::max(fr.py(ta) - fr.py(tb), 0.5) + 0.3) << "\" fill=\"" << colour(u) << "\"/>\n";
    }
  }
  for (const auto& s : overlays) polyline(os, fr, s);
  axes(os, fr, ax);
  os << "</svg>\n";
  return os.str();
}

std::string line_plot(const std::vector<Series>& series, const Axes& ax) {
  std::ostringstream os;
  header(os);
  const Frame fr = bounds(series);
  for (const auto& s : series) polyline(os, fr, s);
  axes(os, fr, ax);
  legend(os, series);
  os << "</svg>\n";
  return os.str();
}

std::string scatter(const std::vector<Series>& series, const Axes& ax) {
  std::ostringstream os;
  header(os);
  const Frame fr = bounds(series);
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
        os << "<circle cx=\"" << f2(fr.px(s.x[i])) << "\" cy=\"" << f2(fr.py(s.y[i])) << "\" r=\"2.5\" fill=\""
           << s.color << "\"/>\n";
  axes(os, fr, ax);
  legend(os, series);
  os << "</svg>\n";
  return os.str();
}

void save(const std::string& path, const std::string& svg) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << svg;
}

}  // namespace fluxlab::svg
