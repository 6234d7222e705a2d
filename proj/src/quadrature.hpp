#pragma once

// Panel-based quadrature shared by the noise and Redfield modules.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace kerrnoise::detail {

template <class T>
struct PanelSum {
  T value{};
  double error = 0.0;
};

/// Subdivides [b_i, b_{i+1}] so that every panel is at most `max_width` wide
/// and, for positive abscissae, spans at most a factor `max_ratio`. The ratio
/// rule grades panels geometrically towards a small lower cutoff where 1/omega
/// spectra vary fastest.
inline std::vector<double> refine_breakpoints(std::vector<double> base, double max_width,
                                              double max_ratio = 2.0) {
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  std::vector<double> out;
  if (base.empty()) return out;
  out.push_back(base.front());
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    double a = base[i];
    const double b = base[i + 1];
    while (a < b) {
      double next = std::min(b, a + max_width);
      if (a > 0.0) next = std::min(next, a * max_ratio);
      // avoid a sliver at the end of the interval
      if (b - next < 1e-3 * (next - a)) next = b;
      out.push_back(next);
      a = next;
    }
  }
  return out;
}

/// Adaptive Gauss-Kronrod (15 point) on every panel, summing values and
/// error estimates. `rel_tol` is handed to each panel.
template <class F>
auto integrate_panels(F&& f, const std::vector<double>& breaks, double rel_tol = 1e-13,
                      unsigned max_depth = 12) {
  using T = decltype(f(0.0));
  PanelSum<T> sum;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double err = 0.0;
    sum.value += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, breaks[i], breaks[i + 1], max_depth, rel_tol, &err);
    sum.error += err;
  }
  return sum;
}

}  // namespace kerrnoise::detail
