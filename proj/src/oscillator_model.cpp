#include "oscillator_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"
#include "numeric_text.hpp"

namespace kerrnoise {

OscillatorModel::OscillatorModel(double omega, double chi, Nonlinearity kind, std::vector<double> u,
                                 int n_max)
    : omega_(omega), chi_(chi), nonlinearity_(kind), u_(std::move(u)), n_max_(n_max) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("oscillator frequency omega must be > 0");
  if (!(chi >= 0.0) || !std::isfinite(chi)) throw ConfigError("nonlinearity chi must be finite and >= 0");
  if (n_max < 1) throw ConfigError("n_max must be >= 1");
  if (n_max > max_supported_n_max()) {
    std::ostringstream msg;
    msg << "U table covers n <= " << u_.size() - 1 << ", which supports n_max <= "
        << max_supported_n_max() << " (requested " << n_max << ")";
    throw ConfigError(msg.str());
  }
  for (int n = 0; n <= n_max_; ++n) {
    const double w = ladder_frequency_unchecked(n);
    if (!(w > 0.0) || !std::isfinite(w)) {
      std::ostringstream msg;
      msg << "ladder frequency Omega_" << n << " = " << w << " is not positive";
      throw ConfigError(msg.str());
    }
  }
}

OscillatorModel OscillatorModel::kerr(double omega, double chi, int n_max) {
  return {omega, chi, Nonlinearity::Kerr, {}, n_max};
}

OscillatorModel OscillatorModel::custom(double omega, double chi, std::vector<double> u, int n_max) {
  for (double v : u)
    if (!std::isfinite(v)) throw ConfigError("U table values must be finite");
  return {omega, chi, Nonlinearity::CustomTable, std::move(u), n_max};
}

std::vector<double> OscillatorModel::load_u_table(const std::filesystem::path& path) {
  const auto rows = detail::read_numeric_columns(path, 2);
  std::vector<double> u;
  u.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i][0] != static_cast<double>(i))
      throw ConfigError(path.string() + ": U table rows must list n = 0, 1, 2, ... in order");
    u.push_back(rows[i][1]);
  }
  return u;
}

int OscillatorModel::max_supported_n_max() const noexcept {
  if (nonlinearity_ == Nonlinearity::Kerr) return std::numeric_limits<int>::max() / 2;
  return static_cast<int>(u_.size()) - 2;
}

OscillatorModel OscillatorModel::with_n_max(int n_max) const {
  return {omega_, chi_, nonlinearity_, u_, n_max};
}

double OscillatorModel::u(int n) const {
  if (nonlinearity_ == Nonlinearity::Kerr) return static_cast<double>(n) * (n - 1);
  return u_.at(static_cast<std::size_t>(n));
}

double OscillatorModel::energy(int n) const { return omega_ * n + chi_ * u(n); }

double OscillatorModel::ladder_frequency_unchecked(int n) const {
  if (nonlinearity_ == Nonlinearity::Kerr) return omega_ + 2.0 * chi_ * n;
  return omega_ + chi_ * (u(n + 1) - u(n));
}

double OscillatorModel::ladder_frequency(int n) const {
  if (n < 0 || n > n_max_) {
    std::ostringstream msg;
    msg << "ladder index " << n << " outside [0, " << n_max_ << "]";
    throw ConfigError(msg.str());
  }
  return ladder_frequency_unchecked(n);
}

int choose_truncation(const OscillatorModel& model, const NoiseModel& noise, double tail_tol, int cap) {
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw ConfigError("tail_tol must lie in (0, 1)");
  if (cap < 1) throw ConfigError("truncation cap must be >= 1");
  const int limit = std::min(cap, model.max_supported_n_max());
  const auto ladder = model.with_n_max(limit);
  const double log_tol = std::log(tail_tol);
  double log_weight = 0.0;
  double log_max = 0.0;
  bool decaying = false;
  for (int n = 1; n <= limit; ++n) {
    const double w = ladder.ladder_frequency(n - 1);
    const auto r = noise.rates_total(w);
    if (r.lower <= 0.0) {
      if (r.raise > 0.0) throw PhysicsError("non-normalizable state: no decay channel at Omega_" + std::to_string(n - 1));
      if (n == 1) throw PhysicsError("disconnected ladder: no noise acts at the ground-state transition");
      if (!decaying)
        throw PhysicsError("non-normalizable infinite-temperature state: state too hot for weak-coupling "
                           "truncation (only classical noise excites the ladder?)");
      return n - 1;
    }
    if (r.raise < (1.0 - 1e-9) * r.lower) decaying = true;
    log_weight += std::log(r.raise) - std::log(r.lower);
    if (log_weight - log_max < log_tol) return n;
    log_max = std::max(log_max, log_weight);
  }
  if (limit < cap)
    throw ConfigError("U table too short to reach the requested tail tolerance (n_max <= " +
                      std::to_string(limit) + ")");
  if (!decaying)
    throw PhysicsError("non-normalizable infinite-temperature state: state too hot for weak-coupling "
                       "truncation (no level within n_max = " + std::to_string(cap) + " decays)");
  throw PhysicsError("state too hot for weak-coupling truncation: tail not below " +
                     std::to_string(tail_tol) + " within n_max = " + std::to_string(cap));
}

}  // namespace kerrnoise
