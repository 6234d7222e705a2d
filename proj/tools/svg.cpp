#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "config.hpp"

namespace kncli::svg {

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 80, kRight = 30, kTop = 40, kBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Axis {
  double lo, hi;
  bool log;
  double pixel_lo, pixel_hi;

  double map(double v) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double t = ((log ? std::log10(v) : v) - a) / (b - a);
    return pixel_lo + t * (pixel_hi - pixel_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1.0) {
        const double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) out.push_back(v);
      }
      return out;
    }
    const double raw = (hi - lo) / 5;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return out;
  }
};

Axis fit(const std::vector<const std::vector<double>*>& data, bool log, double p0, double p1) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* d : data)
    for (double v : *d)
      if (std::isfinite(v) && (!log || v > 0)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (!std::isfinite(lo)) lo = log ? 0.1 : 0.0, hi = log ? 10.0 : 1.0;
  if (hi <= lo) {
    const double pad = log ? 10.0 : std::max(1.0, std::abs(lo)) * 0.1;
    lo = log ? lo / pad : lo - pad;
    hi = log ? hi * pad : hi + pad;
  }
  return {lo, hi, log, p0, p1};
}

void frame(std::ostream& o, const std::string& title, const std::string& xl, const std::string& yl, const Axis& x,
           const Axis& y) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
    << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight << "\" height=\""
    << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : x.ticks()) {
    const double px = x.map(t);
    o << "<line x1=\"" << num(px) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << num(px) << "\" y2=\""
      << kHeight - kBottom + 5 << "\" stroke=\"black\"/>";
    o << "<text x=\"" << num(px) << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">"
      << tick_text(t) << "</text>\n";
  }
  for (double t : y.ticks()) {
    const double py = y.map(t);
    o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(py) << "\" x2=\"" << kLeft << "\" y2=\"" << num(py)
      << "\" stroke=\"black\"/>";
    o << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py + 4) << "\" text-anchor=\"end\">" << tick_text(t)
      << "</text>\n";
  }
  o << "<text x=\"" << num(kLeft + (kWidth - kLeft - kRight) / 2) << "\" y=\"" << kHeight - 18
    << "\" text-anchor=\"middle\">" << escape(xl) << "</text>\n";
  o << "<text transform=\"translate(18," << num(kTop + (kHeight - kTop - kBottom) / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(yl) << "</text>\n";
}

void save(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << body;
}

// Diverging blue-white-red on t in [-1, 1].
std::string diverging(double t) {
  t = std::clamp(t, -1.0, 1.0);
  int r, g, b;
  if (t < 0) {
    r = static_cast<int>(255 * (1 + t) + 40 * -t);
    g = static_cast<int>(255 * (1 + t) + 90 * -t);
    b = 255 - static_cast<int>(75 * -t);
  } else {
    r = 255 - static_cast<int>(75 * t);
    g = static_cast<int>(255 * (1 - t) + 40 * t);
    b = static_cast<int>(255 * (1 - t) + 40 * t);
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

void write(const std::filesystem::path& path, const LinePlot& plot) {
  std::vector<const std::vector<double>*> xs, ys;
  for (const auto& s : plot.series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  std::vector<double> marks = plot.y_marks;
  ys.push_back(&marks);
  const Axis x = fit(xs, plot.log_x, kLeft, kWidth - kRight);
  const Axis y = fit(ys, plot.log_y, kHeight - kBottom, kTop);

  std::ostringstream o;
  frame(o, plot.title, plot.x_label, plot.y_label, x, y);
  for (double m : plot.y_marks) {
    if (plot.log_y && m <= 0) continue;
    o << "<line x1=\"" << kLeft << "\" y1=\"" << num(y.map(m)) << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << num(y.map(m)) << "\" stroke=\"grey\" stroke-dasharray=\"5,4\"/>\n";
  }
  int legend = 0;
  for (const auto& s : plot.series) {
    std::string d;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const bool ok = std::isfinite(s.x[i]) && std::isfinite(s.y[i]) && (!plot.log_x || s.x[i] > 0) &&
                      (!plot.log_y || s.y[i] > 0);
      if (!ok) {
        pen_down = false;
        continue;
      }
      d += (pen_down ? " L" : " M") + num(x.map(s.x[i])) + "," + num(y.map(s.y[i]));
      pen_down = true;
    }
    o << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
    if (!s.label.empty()) {
      const double ly = kTop + 16 + 16 * legend++;
      o << "<line x1=\"" << kWidth - kRight - 150 << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << kWidth - kRight - 130
        << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>";
      o << "<text x=\"" << kWidth - kRight - 125 << "\" y=\"" << num(ly) << "\">" << escape(s.label) << "</text>\n";
    }
  }
  o << "</svg>\n";
  save(path, o.str());
}

void write(const std::filesystem::path& path, const HeatMap& map) {
  const std::size_t nx = map.x.size(), ny = map.y.size();
  const auto cell_edges = [](const std::vector<double>& v) {
    std::vector<double> e(v.size() + 1);
    if (v.size() == 1) return std::vector<double>{v[0] - 0.5, v[0] + 0.5};
    for (std::size_t i = 1; i < v.size(); ++i) e[i] = 0.5 * (v[i - 1] + v[i]);
    e.front() = v.front() - (e[1] - v.front());
    e.back() = v.back() + (v.back() - e[v.size() - 1]);
    return e;
  };
  const auto ex = cell_edges(map.x), ey = cell_edges(map.y);
  const Axis x{ex.front(), ex.back(), false, kLeft, kWidth - kRight};
  const Axis y{ey.front(), ey.back(), false, kHeight - kBottom, kTop};

  std::ostringstream o;
  frame(o, map.title, map.x_label, map.y_label, x, y);
  const double level = std::log10(map.contour_level);
  for (std::size_t r = 0; r < ny; ++r)
    for (std::size_t c = 0; c < nx; ++c) {
      const double v = map.values[r * nx + c];
      const std::string fill = std::isfinite(v) && v > 0 ? diverging(std::log10(v) - level) : "#bbbbbb";
      const double x0 = x.map(ex[c]), x1 = x.map(ex[c + 1]);
      const double y0 = y.map(ey[r + 1]), y1 = y.map(ey[r]);
      o << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0) << "\" height=\""
        << num(y1 - y0) << "\" fill=\"" << fill << "\"/>\n";
    }

  // Marching squares on the cell centers, linear interpolation along edges.
  const auto at = [&](std::size_t r, std::size_t c) {
    const double v = map.values[r * nx + c];
    return std::isfinite(v) && v > 0 ? std::log10(v) - level : std::numeric_limits<double>::quiet_NaN();
  };
  std::string d;
  for (std::size_t r = 0; r + 1 < ny; ++r)
    for (std::size_t c = 0; c + 1 < nx; ++c) {
      const double v[4] = {at(r, c), at(r, c + 1), at(r + 1, c + 1), at(r + 1, c)};
      if (std::any_of(v, v + 4, [](double q) { return std::isnan(q); })) continue;
      const double px[4] = {map.x[c], map.x[c + 1], map.x[c + 1], map.x[c]};
      const double py[4] = {map.y[r], map.y[r], map.y[r + 1], map.y[r + 1]};
      std::vector<std::pair<double, double>> cuts;
      for (int e = 0; e < 4; ++e) {
        const int f = (e + 1) % 4;
        if ((v[e] < 0) != (v[f] < 0)) {
          const double t = v[e] / (v[e] - v[f]);
          cuts.emplace_back(px[e] + t * (px[f] - px[e]), py[e] + t * (py[f] - py[e]));
        }
      }
      for (std::size_t k = 0; k + 1 < cuts.size(); k += 2)
        d += " M" + num(x.map(cuts[k].first)) + "," + num(y.map(cuts[k].second)) + " L" +
             num(x.map(cuts[k + 1].first)) + "," + num(y.map(cuts[k + 1].second));
    }
  if (!d.empty())
    o << "<path d=\"" << d << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n";
  o << "</svg>\n";
  save(path, o.str());
}

}  // namespace kncli::svg
