#include "correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "errors.hpp"

namespace kerrnoise {

namespace {

using cd = std::complex<double>;

// sum_m m w_m with w_m = (m+1) rho_{m+1}: the numerator of g2(0) written in
// the same form as the regression initial state, so g2_tau(0) == g2_zero.
Eigen::VectorXd regression_initial(const std::vector<double>& rho) {
  const auto size = static_cast<Eigen::Index>(rho.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(size);
  for (Eigen::Index m = 0; m + 1 < size; ++m) w[m] = static_cast<double>(m + 1) * rho[m + 1];
  return w;
}

double number_trace(const Eigen::VectorXd& v) {
  double s = 0.0;
  for (Eigen::Index m = 0; m < v.size(); ++m) s += static_cast<double>(m) * v[m];
  return s;
}

double mean_of(const std::vector<double>& rho) {
  double m = 0.0;
  for (std::size_t n = 0; n < rho.size(); ++n) m += static_cast<double>(n) * rho[n];
  return m;
}

void check_tau_grid(const std::vector<double>& tau) {
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (!(tau[i] >= 0.0) || !std::isfinite(tau[i])) throw ConfigError("tau values must be finite and >= 0");
    if (i > 0 && !(tau[i] > tau[i - 1])) throw ConfigError("tau grid must be strictly increasing");
  }
}

CorrelationSeries tagged_series(const std::vector<double>& tau, double memory_time) {
  CorrelationSeries s;
  s.tau = tau;
  s.memory_time = memory_time;
  s.outside_validity.reserve(tau.size());
  for (double t : tau) s.outside_validity.push_back(std::isfinite(memory_time) && t < memory_time);
  return s;
}

struct ModeDecomposition {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd vectors;
  Eigen::MatrixXcd inverse;
  double condition = 1.0;
};

ModeDecomposition decompose(const Eigen::MatrixXcd& m) {
  ModeDecomposition d;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, true);
  if (solver.info() != Eigen::Success) {
    d.condition = std::numeric_limits<double>::infinity();
    d.eigenvalues = Eigen::VectorXcd::Zero(m.rows());
    return d;
  }
  d.eigenvalues = solver.eigenvalues();
  d.vectors = solver.eigenvectors();
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d.vectors);
  const auto& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  d.condition = smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
  if (std::isfinite(d.condition)) d.inverse = d.vectors.inverse();
  return d;
}

}  // namespace

double g2_zero(const std::vector<double>& rho) {
  const double mean = mean_of(rho);
  if (!(mean > 0.0)) throw PhysicsError("g2(0) undefined: the mean photon number is zero");
  return number_trace(regression_initial(rho)) / (mean * mean);
}

double g2_zero(const PopulationDistribution& rho) { return g2_zero(rho.probabilities); }

CorrelationSeries g2_tau(const OscillatorModel& model, const NoiseModel& noise,
                         const PopulationDistribution& rho, const std::vector<double>& tau,
                         double memory_time) {
  check_tau_grid(tau);
  const double mean = mean_of(rho.probabilities);
  if (!(mean > 0.0)) throw PhysicsError("g2(tau) undefined: the mean photon number is zero");
  const PopulationPropagator propagator(rate_matrix(model.with_n_max(rho.n_max()), noise));
  const Eigen::VectorXd start = regression_initial(rho.probabilities);
  auto series = tagged_series(tau, memory_time);
  for (double t : tau) series.values.emplace_back(number_trace(propagator.apply(start, t)) / (mean * mean), 0.0);
  return series;
}

Eigen::VectorXcd CoherenceSystem::initial(const PopulationDistribution& rho) const {
  Eigen::VectorXcd p(matrix.rows());
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = static_cast<double>(i + 1) * rho[static_cast<int>(i) + 1];
  return p;
}

CoherenceSystem build_coherence_system(const OscillatorModel& model, const NoiseModel& noise, bool with_shifts) {
  CoherenceSystem sys;
  sys.couplings = ladder_couplings(model, noise, with_shifts);
  const auto& g1 = sys.couplings.g1;
  const auto& g2 = sys.couplings.g2;
  const int top = model.n_max();
  sys.matrix = Eigen::MatrixXcd::Zero(top, top);
  for (int n = 1; n <= top; ++n) {
    const int i = n - 1;
    cd diag = cd(0.0, model.ladder_frequency(n - 1)) + static_cast<double>(n) * (g1[n - 1] + g2[n - 1]);
    if (n >= 2) diag += static_cast<double>(n - 1) * std::conj(g1[n - 2]);
    if (n < top) diag += static_cast<double>(n + 1) * std::conj(g2[n]);
    sys.matrix(i, i) = diag;
    if (n < top) sys.matrix(i, i + 1) = -static_cast<double>(n) * (g1[n] + std::conj(g1[n - 1]));
    if (n >= 2) sys.matrix(i, i - 1) = -static_cast<double>(n) * (g2[n - 2] + std::conj(g2[n - 1]));
  }
  return sys;
}

CorrelationSeries g1_tau(const OscillatorModel& model, const NoiseModel& noise,
                         const PopulationDistribution& rho, const std::vector<double>& tau,
                         double memory_time) {
  check_tau_grid(tau);
  const auto sys = build_coherence_system(model.with_n_max(rho.n_max()), noise);
  const Eigen::VectorXcd p0 = sys.initial(rho);
  auto series = tagged_series(tau, memory_time);
  const auto modes = decompose(sys.matrix);
  if (modes.condition <= 1e12) {
    const Eigen::RowVectorXcd left = Eigen::RowVectorXcd::Ones(p0.size()) * modes.vectors;
    const Eigen::VectorXcd right = modes.inverse * p0;
    for (double t : tau) {
      cd v = 0.0;
      for (Eigen::Index l = 0; l < right.size(); ++l) v += left[l] * std::exp(-modes.eigenvalues[l] * t) * right[l];
      series.values.push_back(t == 0.0 ? p0.sum() : v);
    }
  } else {
    for (double t : tau) {
      const Eigen::MatrixXcd step = (-sys.matrix * t).exp();
      series.values.push_back((step * p0).sum());
    }
  }
  return series;
}

const char* to_string(SpectrumMethod method) {
  return method == SpectrumMethod::Eigenmodes ? "eigenmodes" : "resolvent";
}

SpectrumEvaluator::SpectrumEvaluator(CoherenceSystem system, Eigen::VectorXcd initial,
                                     const SpectrumOptions& options)
    : system_(std::move(system)), initial_(std::move(initial)) {
  if (initial_.size() != system_.matrix.rows()) throw ConfigError("initial coherence vector has the wrong length");
  const auto modes = decompose(system_.matrix);
  eigenvalues_ = modes.eigenvalues;
  condition_ = modes.condition;
  if (options.force_resolvent || !(modes.condition <= options.condition_limit)) {
    method_ = SpectrumMethod::Resolvent;
    return;
  }
  const Eigen::RowVectorXcd left = Eigen::RowVectorXcd::Ones(initial_.size()) * modes.vectors;
  const Eigen::VectorXcd right = modes.inverse * initial_;
  weights_ = left.transpose().cwiseProduct(right);
}

double SpectrumEvaluator::operator()(double omega) const {
  if (method_ == SpectrumMethod::Eigenmodes) {
    cd s = 0.0;
    for (Eigen::Index l = 0; l < weights_.size(); ++l) s += weights_[l] / (eigenvalues_[l] - cd(0.0, omega));
    return s.real();
  }
  Eigen::MatrixXcd shifted = system_.matrix;
  shifted.diagonal().array() -= cd(0.0, omega);
  const Eigen::VectorXcd x = shifted.partialPivLu().solve(initial_);
  return x.sum().real();
}

double SpectrumEvaluator::integral(double a, double b) const {
  if (method_ == SpectrumMethod::Resolvent) return std::numbers::pi * spectral_sum_rule(*this, a, b);
  // Int 1/(lambda - i w) dw = i log(lambda - i w); Re lambda > 0 keeps the
  // argument off the branch cut.
  cd s = 0.0;
  for (Eigen::Index l = 0; l < weights_.size(); ++l) {
    const cd lam = eigenvalues_[l];
    s += weights_[l] * cd(0.0, 1.0) * (std::log(lam - cd(0.0, b)) - std::log(lam - cd(0.0, a)));
  }
  return s.real();
}

namespace {

// Logarithmic grid on [a, b] plus points within ten linewidths of each mode,
// expanding geometrically beyond.
std::vector<double> spectral_grid(const Eigen::VectorXcd& eigenvalues, double a, double b, int log_points,
                                  double spacing_per_width) {
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(log_points) + 400 * static_cast<std::size_t>(eigenvalues.size()));
  if (a > 0.0) {
    const double la = std::log(a);
    const double lb = std::log(b);
    for (int i = 0; i <= log_points; ++i) x.push_back(std::exp(la + (lb - la) * i / log_points));
  } else {
    for (int i = 0; i <= log_points; ++i) x.push_back(a + (b - a) * i / log_points);
  }
  x.front() = a;
  x.back() = b;
  for (Eigen::Index l = 0; l < eigenvalues.size(); ++l) {
    const double width = eigenvalues[l].real();
    const double center = eigenvalues[l].imag();
    if (!(width > 0.0) || center < a || center > b) continue;
    const double h = width / spacing_per_width;
    const int half = static_cast<int>(std::lround(10.0 * spacing_per_width));
    for (int j = -half; j <= half; ++j) x.push_back(center + j * h);
    for (double d = 10.0 * width * 1.25; d < b - a; d *= 1.25) {
      x.push_back(center + d);
      x.push_back(center - d);
    }
  }
  std::erase_if(x, [&](double v) { return v < a || v > b; });
  std::sort(x.begin(), x.end());
  std::vector<double> out;
  out.reserve(x.size());
  for (double v : x)
    if (out.empty() || v - out.back() > 1e-13 * std::max(1.0, std::abs(v))) out.push_back(v);
  return out;
}

}  // namespace

double spectral_sum_rule(const SpectrumEvaluator& s, double a, double b) {
  if (!(b > a)) throw ConfigError("sum-rule window must satisfy a < b");
  const auto x = spectral_grid(s.eigenvalues(), a, b, 4000, 8.0);
  double total = 0.0;
  double left = s(x[0]);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double right = s(x[i + 1]);
    const double mid = s(0.5 * (x[i] + x[i + 1]));
    total += (x[i + 1] - x[i]) / 6.0 * (left + 4.0 * mid + right);
    left = right;
  }
  return total / std::numbers::pi;
}

std::vector<SpectralPeak> find_spectral_peaks(const SpectrumEvaluator& s, double a, double b, double floor) {
  if (!(b > a)) throw ConfigError("peak window must satisfy a < b");
  const auto x = spectral_grid(s.eigenvalues(), a, b, 2000, 4.0);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = s(x[i]);
  const double top = *std::max_element(y.begin(), y.end());
  std::vector<SpectralPeak> peaks;
  if (!(top > 0.0)) return peaks;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1]) || y[i] < floor * top) continue;
    // golden-section refinement on the bracketing samples
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = x[i - 1];
    double hi = x[i + 1];
    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    double fc = s(c);
    double fd = s(d);
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - kInvPhi * (hi - lo);
        fc = s(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + kInvPhi * (hi - lo);
        fd = s(d);
      }
    }
    SpectralPeak p;
    p.position = 0.5 * (lo + hi);
    p.height = s(p.position);
    const double half = 0.5 * p.height;
    const double seed = std::max(x[i + 1] - x[i - 1], 1e-12);
    auto edge = [&](double dir) {
      double inside = p.position;
      double step = 0.25 * seed;
      double outside = p.position + dir * step;
      while (s(outside) > half) {
        inside = outside;
        step *= 2.0;
        outside = p.position + dir * step;
        if (outside < a || outside > b) return std::numeric_limits<double>::quiet_NaN();
      }
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (inside + outside);
        if (s(m) > half) inside = m; else outside = m;
      }
      return 0.5 * (inside + outside);
    };
    const double right = edge(1.0);
    const double left = edge(-1.0);
    if (std::isfinite(left) && std::isfinite(right)) p.fwhm = right - left;
    else if (std::isfinite(right)) p.fwhm = 2.0 * (right - p.position);
    else if (std::isfinite(left)) p.fwhm = 2.0 * (p.position - left);
    else p.fwhm = std::numeric_limits<double>::quiet_NaN();
    peaks.push_back(p);
  }
  return peaks;
}

SpectrumResult spectrum(const OscillatorModel& model, const NoiseModel& noise, const PopulationDistribution& rho,
                        const std::vector<double>& omega, const SpectrumOptions& options) {
  if (omega.empty()) throw ConfigError("spectrum needs at least one frequency");
  for (std::size_t i = 1; i < omega.size(); ++i)
    if (!(omega[i] > omega[i - 1])) throw ConfigError("spectrum frequency grid must be strictly increasing");
  auto sys = build_coherence_system(model.with_n_max(rho.n_max()), noise, options.with_shifts);
  Eigen::VectorXcd p0 = sys.initial(rho);
  const SpectrumEvaluator eval(std::move(sys), std::move(p0), options);

  SpectrumResult out;
  out.omega = omega;
  out.method = eval.method();
  out.condition = eval.condition();
  out.mean_occupation = rho.mean();
  for (Eigen::Index l = 0; l < eval.eigenvalues().size(); ++l) {
    const cd lam = eval.eigenvalues()[l];
    out.eigenvalues.push_back(lam);
    if (!(lam.real() > 0.0)) {
      std::ostringstream msg;
      msg << "non-decaying coherence mode: lambda = " << lam.real() << (lam.imag() < 0 ? " - " : " + ")
          << std::abs(lam.imag()) << "i";
      out.warnings.push_back(msg.str());
    }
  }
  if (out.method == SpectrumMethod::Resolvent && !options.force_resolvent) {
    std::ostringstream msg;
    msg << "eigenvector condition " << out.condition << " above limit; using the resolvent";
    out.warnings.push_back(msg.str());
  }
  out.values.reserve(omega.size());
  for (double w : omega) out.values.push_back(eval(w));
  const double top = *std::max_element(out.values.begin(), out.values.end());
  const double bottom = *std::min_element(out.values.begin(), out.values.end());
  if (bottom < -1e-12 * std::max(top, 0.0)) {
    std::ostringstream msg;
    msg << "spectrum takes negative values (min " << bottom << ", max " << top << ")";
    out.warnings.push_back(msg.str());
  }
  out.sum_rule_integral = spectral_sum_rule(eval, noise.omega_min(), noise.omega_max());
  if (std::abs(out.sum_rule_integral - out.mean_occupation) > 0.01 * out.mean_occupation) {
    std::ostringstream msg;
    msg << "sum rule off by more than 1%: integral " << out.sum_rule_integral << " vs <n> " << out.mean_occupation;
    out.warnings.push_back(msg.str());
  }
  if (omega.size() >= 2) out.peaks = find_spectral_peaks(eval, omega.front(), omega.back(), options.peak_floor);
  return out;
}

}  // namespace kerrnoise
