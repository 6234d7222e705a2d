#include "redfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "errors.hpp"
#include "quadrature.hpp"

namespace kerrnoise {

namespace {

constexpr double kRatioCeiling = 1.0 - 1e-9;

}  // namespace

double principal_value_shift(const NoiseModel& noise, double omega0, ShiftPart part) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw ConfigError("principal value needs omega0 > 0");
  const double a = noise.omega_min();
  const double b = noise.omega_max();
  if (std::abs(omega0 - a) < 1e-9 || std::abs(omega0 - b) < 1e-9) {
    std::ostringstream msg;
    msg << "singularity at cutoff: principal value at omega0 = " << omega0
        << " coincides with a noise cutoff";
    throw NumericsError(msg.str());
  }
  const auto f = [&](double w) {
    const auto v = noise.eval_total(w);
    return part == ShiftPart::Symmetric ? v.symmetric : v.antisymmetric;
  };

  auto base = noise.breakpoints();
  const auto regular_breaks = detail::refine_breakpoints(base, (b - a) / 4.0);
  const auto regular =
      detail::integrate_panels([&](double w) { return f(w) / (omega0 + w); }, regular_breaks);

  const double c = std::clamp(omega0, a, b);
  const double fc = f(c);
  if (c == omega0) base.push_back(omega0);
  const auto singular_breaks = detail::refine_breakpoints(base, (b - a) / 4.0);
  const auto subtracted = detail::integrate_panels(
      [&](double w) { return (f(w) - fc) / (omega0 - w); }, singular_breaks);
  const double singular = subtracted.value + fc * std::log(std::abs((omega0 - a) / (omega0 - b)));

  const double sign = part == ShiftPart::Symmetric ? 1.0 : -1.0;
  return (regular.value + sign * singular) / (2.0 * std::numbers::pi);
}

RedfieldCoefficients redfield_coefficients(const OscillatorModel& model, const NoiseModel& noise,
                                           bool with_shifts) {
  RedfieldCoefficients out;
  out.has_shifts = with_shifts;
  const int n_max = model.n_max();
  out.levels.resize(static_cast<std::size_t>(n_max) + 1);
  double previous_lower = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    auto& level = out.levels[static_cast<std::size_t>(n)];
    level.frequency = model.ladder_frequency(n);
    const auto r = noise.rates_total(level.frequency);
    level.f_plus = 0.5 * r.lower;
    level.f_minus = 0.5 * r.raise;
    level.raise = (n + 1) * r.raise;
    level.lower = n * previous_lower;
    previous_lower = r.lower;
    if (with_shifts) {
      const double rs = principal_value_shift(noise, level.frequency, ShiftPart::Symmetric);
      const double ra = principal_value_shift(noise, level.frequency, ShiftPart::Antisymmetric);
      level.r_plus = rs + ra;
      level.r_minus = rs - ra;
    }
  }
  return out;
}

LadderCouplings ladder_couplings(const OscillatorModel& model, const NoiseModel& noise, bool with_shifts) {
  LadderCouplings out;
  for (int n = 0; n < model.n_max(); ++n) {
    const double w = model.ladder_frequency(n);
    const auto r = noise.rates_total(w);
    const double rs = with_shifts ? principal_value_shift(noise, w, ShiftPart::Symmetric) : 0.0;
    const double ra = with_shifts ? principal_value_shift(noise, w, ShiftPart::Antisymmetric) : 0.0;
    out.g1.emplace_back(0.5 * r.lower, rs - ra);
    out.g2.emplace_back(0.5 * r.raise, rs + ra);
  }
  return out;
}

Eigen::MatrixXd RateGenerator::dense() const {
  const auto size = static_cast<Eigen::Index>(raise.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index n = 0; n < size; ++n) {
    m(n, n) = -(raise[n] + lower[n]);
    if (n > 0) m(n, n - 1) = raise[n - 1];
    if (n + 1 < size) m(n, n + 1) = lower[n + 1];
  }
  return m;
}

Eigen::VectorXd RateGenerator::apply(const Eigen::VectorXd& rho) const {
  const auto size = static_cast<Eigen::Index>(raise.size());
  Eigen::VectorXd out(size);
  for (Eigen::Index n = 0; n < size; ++n) {
    double v = -(raise[n] + lower[n]) * rho[n];
    if (n > 0) v += raise[n - 1] * rho[n - 1];
    if (n + 1 < size) v += lower[n + 1] * rho[n + 1];
    out[n] = v;
  }
  return out;
}

RateGenerator rate_matrix(const OscillatorModel& model, const NoiseModel& noise) {
  const auto coeffs = redfield_coefficients(model, noise, false);
  RateGenerator g;
  for (const auto& level : coeffs.levels) {
    g.raise.push_back(level.raise);
    g.lower.push_back(level.lower);
  }
  g.raise.back() = 0.0;
  for (int n = 0; n < g.n_max(); ++n) {
    if (g.raise[n] == 0.0 && g.lower[n + 1] == 0.0) {
      std::ostringstream msg;
      msg << "disconnected ladder between n = " << n << " and n = " << n + 1
          << " (Omega_" << n << " = " << coeffs.levels[n].frequency << " outside the noise support)";
      g.warnings.push_back(msg.str());
    }
  }
  return g;
}

double PopulationDistribution::mean() const {
  double m = 0.0;
  for (std::size_t n = 0; n < probabilities.size(); ++n) m += static_cast<double>(n) * probabilities[n];
  return m;
}

Eigen::VectorXd PopulationDistribution::vector() const {
  return Eigen::Map<const Eigen::VectorXd>(probabilities.data(),
                                           static_cast<Eigen::Index>(probabilities.size()));
}

PopulationDistribution ness(const OscillatorModel& model, const NoiseModel& noise) {
  if (noise.components().empty()) throw PhysicsError("disconnected ladder: the noise model is empty, no steady state exists");
  PopulationDistribution out;
  out.requested_n_max = model.n_max();
  out.log_weights.push_back(0.0);
  bool decaying = false;
  for (int n = 1; n <= model.n_max(); ++n) {
    const double w = model.ladder_frequency(n - 1);
    const auto r = noise.rates_total(w);
    if (r.lower <= 0.0) {
      if (r.raise > 0.0)
        throw PhysicsError("non-normalizable state: nothing removes photons at Omega_" + std::to_string(n - 1));
      if (n == 1)
        throw PhysicsError("disconnected ladder: no noise acts at the ground-state transition Omega_0 = " +
                           std::to_string(w));
      std::ostringstream msg;
      msg << "ladder truncated at n = " << n - 1 << ": Omega_" << n - 1 << " = " << w
          << " lies outside the noise support";
      out.warnings.push_back(msg.str());
      break;
    }
    if (r.raise < kRatioCeiling * r.lower) decaying = true;
    out.log_weights.push_back(out.log_weights.back() + std::log(r.raise) - std::log(r.lower));
  }
  if (!decaying)
    throw PhysicsError(
        "non-normalizable infinite-temperature state: W_A^tot vanishes on the ladder, so every "
        "level is equally populated (classical noise only?)");

  const double log_max = *std::max_element(out.log_weights.begin(), out.log_weights.end());
  double z = 0.0;
  for (double lw : out.log_weights) z += std::exp(lw - log_max);
  const double log_z = log_max + std::log(z);
  out.probabilities.reserve(out.log_weights.size());
  for (double lw : out.log_weights) out.probabilities.push_back(std::exp(lw - log_z));
  out.tail_ratio = std::exp(out.log_weights.back() - log_max);
  return out;
}

CurrentReport currents(const OscillatorModel& model, const NoiseModel& noise,
                       const PopulationDistribution& rho) {
  CurrentReport out;
  const int n_max = rho.n_max();
  const auto ladder = model.with_n_max(n_max);
  out.mean_occupation = rho.mean();
  const auto& comps = noise.components();
  out.per_component.assign(comps.size(), 0.0);
  for (std::size_t l = 0; l < comps.size(); ++l) {
    double current = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      const double raise =
          n < n_max ? (n + 1) * noise.rates_component(l, ladder.ladder_frequency(n)).raise : 0.0;
      const double lower = n > 0 ? n * noise.rates_component(l, ladder.ladder_frequency(n - 1)).lower : 0.0;
      current += rho[n] * (lower - raise);
    }
    out.per_component[l] = current;
    switch (comps[l].kind()) {
      case NoiseKind::Classical1OverF: out.classical_source -= current; break;
      case NoiseKind::SuperOhmicThermal: out.phonon += current; break;
      case NoiseKind::FlatThermal:
        out.detector += current;
        out.detector_closed_form += 2.0 * comps[l].gamma() * out.mean_occupation;
        break;
      case NoiseKind::Tabulated: out.other += current; break;
    }
  }
  return out;
}

PopulationPropagator::PopulationPropagator(RateGenerator generator) : generator_(std::move(generator)) {
  const int n_max = generator_.n_max();
  const auto size = static_cast<Eigen::Index>(n_max) + 1;
  // log of the detailed-balance weights pi_n / pi_0
  std::vector<double> log_pi(static_cast<std::size_t>(size), 0.0);
  bool connected = true;
  for (int n = 1; n <= n_max; ++n) {
    const double c = generator_.raise[n - 1];
    const double d = generator_.lower[n];
    if (!(c > 0.0) || !(d > 0.0)) {
      connected = false;
      break;
    }
    log_pi[n] = log_pi[n - 1] + std::log(c) - std::log(d);
  }
  if (!connected) {
    use_integrator_ = true;
    condition_ = std::numeric_limits<double>::infinity();
    return;
  }
  const double hi = *std::max_element(log_pi.begin(), log_pi.end());
  const double lo = *std::min_element(log_pi.begin(), log_pi.end());
  condition_ = std::exp(0.5 * (hi - lo));
  if (!(condition_ <= kConditionLimit)) {
    use_integrator_ = true;
    return;
  }
  sqrt_weights_.resize(size);
  for (Eigen::Index n = 0; n < size; ++n) sqrt_weights_[n] = std::exp(0.5 * (log_pi[n] - hi));
  Eigen::VectorXd diag(size);
  Eigen::VectorXd off(std::max<Eigen::Index>(size - 1, 0));
  for (Eigen::Index n = 0; n < size; ++n) diag[n] = -(generator_.raise[n] + generator_.lower[n]);
  for (Eigen::Index n = 0; n + 1 < size; ++n)
    off[n] = std::sqrt(generator_.raise[n] * generator_.lower[n + 1]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    use_integrator_ = true;
    return;
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

double PopulationPropagator::spectral_gap() const {
  if (use_integrator_ || eigenvalues_.size() < 2) return 0.0;
  // eigenvalues ascend; the largest is the stationary 0
  return -eigenvalues_[eigenvalues_.size() - 2];
}

Eigen::VectorXd PopulationPropagator::apply(const Eigen::VectorXd& rho0, double t) const {
  if (rho0.size() != static_cast<Eigen::Index>(generator_.raise.size()))
    throw ConfigError("initial population vector has the wrong length");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("evolution time must be finite and >= 0");
  if ((rho0.array() < 0.0).any()) throw ConfigError("initial populations must be nonnegative");
  if (t == 0.0) return rho0;
  if (use_integrator_) return integrate(rho0, t);
  const Eigen::VectorXd scaled = rho0.cwiseQuotient(sqrt_weights_);
  Eigen::VectorXd modal = eigenvectors_.transpose() * scaled;
  for (Eigen::Index k = 0; k < modal.size(); ++k) modal[k] *= std::exp(std::min(eigenvalues_[k], 0.0) * t);
  return (eigenvectors_ * modal).cwiseProduct(sqrt_weights_);
}

Eigen::VectorXd PopulationPropagator::integrate(const Eigen::VectorXd& rho0, double t) const {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  State x(rho0.data(), rho0.data() + rho0.size());
  const auto rhs = [this](const State& y, State& dy, double) {
    const auto size = y.size();
    for (std::size_t n = 0; n < size; ++n) {
      double v = -(generator_.raise[n] + generator_.lower[n]) * y[n];
      if (n > 0) v += generator_.raise[n - 1] * y[n - 1];
      if (n + 1 < size) v += generator_.lower[n + 1] * y[n + 1];
      dy[n] = v;
    }
  };
  double rate = 0.0;
  for (std::size_t n = 0; n < generator_.raise.size(); ++n)
    rate = std::max(rate, generator_.raise[n] + generator_.lower[n]);
  const double dt0 = rate > 0.0 ? 0.1 / rate : t;
  try {
    auto stepper = odeint::make_controlled(1e-14, 1e-12, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, rhs, x, 0.0, t, std::min(dt0, t));
  } catch (const std::exception& e) {
    throw NumericsError(std::string("population integrator failed: ") + e.what());
  }
  return Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

Eigen::VectorXd evolve_populations(const OscillatorModel& model, const NoiseModel& noise,
                                   const Eigen::VectorXd& rho0, double t) {
  return PopulationPropagator(rate_matrix(model, noise)).apply(rho0, t);
}

}  // namespace kerrnoise
