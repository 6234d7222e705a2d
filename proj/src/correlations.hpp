#pragma once

// Photon statistics at the steady state: g2(0), the regression correlators
// g2(tau) and g1(tau), and the emission spectrum S(omega).

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "noise_spectra.hpp"
#include "oscillator_model.hpp"
#include "redfield.hpp"

namespace kerrnoise {

/// sum n(n-1) rho_n / <n>^2. Throws PhysicsError when <n> = 0.
double g2_zero(const PopulationDistribution& rho);
double g2_zero(const std::vector<double>& rho);

struct CorrelationSeries {
  std::vector<double> tau;
  std::vector<std::complex<double>> values;
  /// tau < memory_time: outside the regime where the regression formula holds.
  std::vector<bool> outside_validity;
  double memory_time = std::numeric_limits<double>::quiet_NaN();
};

/// g2(tau) = Tr[n rho~(tau)] / <n>^2 with rho~(0)_m = (m+1) rho_{m+1} evolved
/// by the population rate equation. `memory_time` (NaN to skip) only tags the
/// samples. The ladder is truncated at rho.n_max().
CorrelationSeries g2_tau(const OscillatorModel& model, const NoiseModel& noise,
                         const PopulationDistribution& rho, const std::vector<double>& tau,
                         double memory_time = std::numeric_limits<double>::quiet_NaN());

/// First coherence band P_n = sqrt(n) rho~_{n,n-1}, n = 1..n_max, obeying
/// dP/dtau = -M P with tridiagonal M:
///   M_{n,n}   = i Omega_{n-1} + A_n + K_n + G1_{n-1} - G2_{n-1}
///   M_{n,n+1} = -A_{n+1},  M_{n,n-1} = -K_{n-1}
///   A_n = (n-1)(G1_{n-1} + G1*_{n-2}),  K_n = (n+1)(G2_{n-1} + G2*_n).
/// At n = n_max the (n+1) G2*_n piece of K_n is absent (a a^dagger vanishes on
/// the top level of the truncated space). Row/column n-1 holds P_n.
struct CoherenceSystem {
  Eigen::MatrixXcd matrix;
  LadderCouplings couplings;

  int n_max() const noexcept { return static_cast<int>(matrix.rows()); }
  /// P_n(0) = n rho_n.
  Eigen::VectorXcd initial(const PopulationDistribution& rho) const;
};

CoherenceSystem build_coherence_system(const OscillatorModel& model, const NoiseModel& noise,
                                       bool with_shifts = true);

/// g1(tau) = sum_n P_n(tau). Ladder truncated at rho.n_max().
CorrelationSeries g1_tau(const OscillatorModel& model, const NoiseModel& noise,
                         const PopulationDistribution& rho, const std::vector<double>& tau,
                         double memory_time = std::numeric_limits<double>::quiet_NaN());

enum class SpectrumMethod { Eigenmodes, Resolvent };

const char* to_string(SpectrumMethod method);

struct SpectrumOptions {
  bool force_resolvent = false;
  double condition_limit = 1e12;
  /// Peaks below peak_floor * max S are ignored.
  double peak_floor = 1e-10;
  /// false drops the principal-value shifts (diagnostic only).
  bool with_shifts = true;
};

/// S(omega) = Re 1^T (M - i omega)^{-1} P(0), the one-sided transform of g1.
/// Evaluated as sum_l c_l / (lambda_l - i omega) from M = V Lambda V^{-1}, or
/// by a direct complex solve per frequency when V is ill-conditioned.
class SpectrumEvaluator {
 public:
  SpectrumEvaluator(CoherenceSystem system, Eigen::VectorXcd initial, const SpectrumOptions& options = {});

  double operator()(double omega) const;
  /// Exact integral of S over [a, b] from the Lorentzian antiderivatives.
  double integral(double a, double b) const;

  const Eigen::VectorXcd& eigenvalues() const noexcept { return eigenvalues_; }
  SpectrumMethod method() const noexcept { return method_; }
  double condition() const noexcept { return condition_; }
  const CoherenceSystem& system() const noexcept { return system_; }

 private:
  CoherenceSystem system_;
  Eigen::VectorXcd initial_;
  Eigen::VectorXcd eigenvalues_;
  Eigen::VectorXcd weights_;  // c_l = (1^T V)_l (V^{-1} P0)_l
  SpectrumMethod method_ = SpectrumMethod::Eigenmodes;
  double condition_ = 1.0;
};

struct SpectralPeak {
  double position = 0.0;
  double height = 0.0;
  double fwhm = 0.0;
};

struct SpectrumResult {
  std::vector<double> omega;
  std::vector<double> values;
  std::vector<std::complex<double>> eigenvalues;
  std::vector<SpectralPeak> peaks;
  double sum_rule_integral = 0.0;  // Int S d omega / pi over the noise support
  double mean_occupation = 0.0;
  SpectrumMethod method = SpectrumMethod::Eigenmodes;
  double condition = 1.0;
  std::vector<std::string> warnings;
};

/// Composite Simpson integral of S / pi over [a, b] on a logarithmic grid
/// refined within ten linewidths of every mode.
double spectral_sum_rule(const SpectrumEvaluator& s, double a, double b);

/// Local maxima of S inside [a, b] above floor * max S, refined by
/// golden-section search, with the full width at half maximum.
std::vector<SpectralPeak> find_spectral_peaks(const SpectrumEvaluator& s, double a, double b,
                                              double floor = 1e-10);

SpectrumResult spectrum(const OscillatorModel& model, const NoiseModel& noise,
                        const PopulationDistribution& rho, const std::vector<double>& omega,
                        const SpectrumOptions& options = {});

}  // namespace kerrnoise
