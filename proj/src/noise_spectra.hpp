#pragma once

// Composable noise spectral functions.
//
// Frequencies are measured in units of the reference frequency omega_* (fixed
// to 1), times in 1/omega_*, and the coupling amplitudes Gamma already carry
// the square of the system-bath coupling.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace kerrnoise {

enum class NoiseKind { Classical1OverF, SuperOhmicThermal, FlatThermal, Tabulated };

const char* to_string(NoiseKind kind);

/// Symmetric and antisymmetric parts of a noise spectral function, W_S and W_A.
struct SpectralPair {
  double symmetric = 0.0;
  double antisymmetric = 0.0;
};

/// The two combinations that enter transition rates: W_S - W_A drives the
/// oscillator up the ladder, W_S + W_A drives it down. Thermal components
/// evaluate these directly instead of by subtraction, which would lose every
/// digit once beta*omega exceeds ~37.
struct RatePair {
  double raise = 0.0;
  double lower = 0.0;
};

struct TablePoint {
  double omega = 0.0;
  double symmetric = 0.0;
  double antisymmetric = 0.0;
};

class NoiseComponent {
 public:
  /// W_S = gamma / omega, W_A = 0.
  static NoiseComponent classical_one_over_f(double gamma);
  /// W_A = gamma * omega^s, W_S = W_A coth(beta omega / 2). beta may be +inf.
  static NoiseComponent super_ohmic_thermal(double gamma, double exponent, double beta);
  /// W_A = gamma, W_S = W_A coth(beta omega / 2). beta may be +inf.
  static NoiseComponent flat_thermal(double gamma, double beta);
  /// Sampled (omega, W_S, W_A); interpolated log-log between nodes (linear in
  /// log omega where a value is zero or changes sign), zero outside the table.
  static NoiseComponent tabulated(std::vector<TablePoint> table);
  /// Three-column text file (omega, W_S, W_A); '#' comments allowed.
  static NoiseComponent load_table(const std::filesystem::path& path);

  NoiseKind kind() const noexcept { return kind_; }
  double gamma() const noexcept { return gamma_; }
  double exponent() const noexcept { return exponent_; }
  double beta() const noexcept { return beta_; }
  const std::vector<TablePoint>& table() const noexcept { return table_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  bool is_thermal() const noexcept {
    return kind_ == NoiseKind::SuperOhmicThermal || kind_ == NoiseKind::FlatThermal;
  }
  /// True when W_A vanishes identically.
  bool is_classical() const noexcept;

  /// Component values without the global cutoffs; omega > 0.
  SpectralPair evaluate(double omega) const;
  RatePair rates(double omega) const;

 private:
  NoiseComponent() = default;

  NoiseKind kind_ = NoiseKind::Classical1OverF;
  double gamma_ = 0.0;
  double exponent_ = 0.0;
  double beta_ = 0.0;
  std::vector<TablePoint> table_;
  std::vector<std::string> warnings_;
};

/// Sum of components with hard cutoffs: every spectral value is zero outside
/// [omega_min, omega_max]. Immutable after construction.
class NoiseModel {
 public:
  NoiseModel(std::vector<NoiseComponent> components, double omega_min, double omega_max);

  const std::vector<NoiseComponent>& components() const noexcept { return components_; }
  double omega_min() const noexcept { return omega_min_; }
  double omega_max() const noexcept { return omega_max_; }
  bool in_support(double omega) const noexcept {
    return omega >= omega_min_ && omega <= omega_max_;
  }
  /// Cutoffs plus any tabulated nodes strictly inside the support.
  std::vector<double> breakpoints() const;

  SpectralPair eval_total(double omega) const;
  RatePair rates_total(double omega) const;
  SpectralPair eval_component(std::size_t index, double omega) const;
  RatePair rates_component(std::size_t index, double omega) const;

 private:
  std::vector<NoiseComponent> components_;
  double omega_min_;
  double omega_max_;
};

/// W_A / W_S of a thermal component; equals tanh(beta omega / 2).
double kms_check(const NoiseComponent& component, double omega);

struct CorrelationValue {
  std::complex<double> value;
  double error_estimate = 0.0;
};

/// Bath correlation function
///   C(t) = (1/pi) Int_{omega_min}^{omega_max} [W_S cos(omega t) - i W_A sin(omega t)] d omega
/// by adaptive Gauss-Kronrod on panels no wider than pi / (2 max(t, 1)).
/// Throws NumericsError when the summed error estimate exceeds abs_tol.
CorrelationValue correlation_function(const NoiseModel& model, double t, double abs_tol = 1e-10);

/// Fixed Gauss-Legendre rule for C(t), accurate for 0 <= t <= horizon. Used to
/// scan C(t) on long uniform grids where per-point adaptive quadrature is too
/// slow.
class CorrelationSampler {
 public:
  CorrelationSampler(const NoiseModel& model, double horizon);

  std::complex<double> operator()(double t) const;
  /// C(j * step) for j = 0 .. count-1.
  std::vector<std::complex<double>> uniform(double step, std::size_t count) const;
  std::size_t node_count() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    double omega;
    double weighted_symmetric;      // w * W_S / pi
    double weighted_antisymmetric;  // w * W_A / pi
  };
  std::vector<Node> nodes_;
};

struct MemoryTimeOptions {
  double step = 0.01;
  double horizon = 50.0;
};

/// Smallest grid time tau such that |C(t)| < threshold for every grid point
/// t in [tau, horizon]. Throws NumericsError if |C(horizon)| is still above
/// the threshold.
double memory_time(const NoiseModel& model, double threshold, const MemoryTimeOptions& options = {});

/// sqrt(Gamma) of the weakest flat (detector-like) thermal component, or of the
/// weakest quantum component when there is none. Throws ConfigError for
/// classical-only models.
double default_memory_threshold(const NoiseModel& model);

}  // namespace kerrnoise
