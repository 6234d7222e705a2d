#pragma once

// Rotating-wave Redfield coefficients, the photon-number rate equation, its
// steady state and the photon currents into each bath.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "noise_spectra.hpp"
#include "oscillator_model.hpp"

namespace kerrnoise {

enum class ShiftPart { Symmetric, Antisymmetric };

/// Principal-value frequency shifts
///   R_S(w0) = P Int dw/2pi W_S^tot(w) [1/(w0+w) + 1/(w0-w)]
///   R_A(w0) = P Int dw/2pi W_A^tot(w) [1/(w0+w) - 1/(w0-w)]
/// over the noise support. The 1/(w0-w) kernel is handled by subtracting
/// f(c), c = clamp(w0, omega_min, omega_max), and adding the logarithm
/// analytically. Throws NumericsError when w0 sits within 1e-9 of a cutoff.
double principal_value_shift(const NoiseModel& noise, double omega0, ShiftPart part);

struct LevelCoefficients {
  double frequency = 0.0;  // Omega_n
  double f_plus = 0.0;     // [W_S + W_A](Omega_n) / 2
  double f_minus = 0.0;    // [W_S - W_A](Omega_n) / 2
  double r_plus = 0.0;     // R_S + R_A at Omega_n
  double r_minus = 0.0;    // R_S - R_A at Omega_n
  double raise = 0.0;      // C_n = (n+1) [W_S - W_A](Omega_n)
  double lower = 0.0;      // D_n = n [W_S + W_A](Omega_{n-1}), D_0 = 0
};

struct RedfieldCoefficients {
  std::vector<LevelCoefficients> levels;  // n = 0 .. n_max
  bool has_shifts = false;
};

/// Coefficients at every ladder frequency. The principal-value shifts only
/// matter for coherences, so they are computed on request.
RedfieldCoefficients redfield_coefficients(const OscillatorModel& model, const NoiseModel& noise,
                                           bool with_shifts);

/// Tridiagonal birth-death generator L with d rho / dt = L rho and a
/// reflecting top level (C_{n_max} = 0), so every column sums to zero.
struct RateGenerator {
  std::vector<double> raise;  // C_n, n = 0..n_max, last entry 0
  std::vector<double> lower;  // D_n, n = 0..n_max, first entry 0
  std::vector<std::string> warnings;

  int n_max() const noexcept { return static_cast<int>(raise.size()) - 1; }
  Eigen::MatrixXd dense() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& rho) const;
};

/// Complex ladder couplings of the coherence dynamics,
///   G1_n = F_+(Omega_n) + i R_-(Omega_n),  G2_n = F_-(Omega_n) + i R_+(Omega_n),
/// for n = 0 .. n_max - 1. Truncation at n_max never needs index n_max.
/// Without shifts the R terms are dropped (diagnostic use only).
struct LadderCouplings {
  std::vector<std::complex<double>> g1;
  std::vector<std::complex<double>> g2;
};

LadderCouplings ladder_couplings(const OscillatorModel& model, const NoiseModel& noise,
                                 bool with_shifts = true);

RateGenerator rate_matrix(const OscillatorModel& model, const NoiseModel& noise);

struct PopulationDistribution {
  std::vector<double> probabilities;  // rho_n, n = 0..n_max, sums to 1
  std::vector<double> log_weights;    // log(rho_n / rho_0)
  double tail_ratio = 0.0;            // rho_{n_max} / max_n rho_n
  int requested_n_max = 0;            // before any support truncation
  std::vector<std::string> warnings;

  int n_max() const noexcept { return static_cast<int>(probabilities.size()) - 1; }
  double operator[](int n) const { return probabilities.at(static_cast<std::size_t>(n)); }
  double mean() const;
  Eigen::VectorXd vector() const;
};

/// Steady state from the product of rate ratios, accumulated in log space.
/// If W_S + W_A vanishes at some Omega_k (ladder leaves the noise support),
/// levels above k are unreachable and the distribution stops at k.
/// Throws PhysicsError for classical-only (non-normalizable) or disconnected
/// ground-state ladders.
PopulationDistribution ness(const OscillatorModel& model, const NoiseModel& noise);

struct CurrentReport {
  std::vector<double> per_component;  // I_l, photon current into bath l
  double classical_source = 0.0;      // I_cl: minus the sum over 1/f components
  double phonon = 0.0;                // I_q: super-Ohmic components
  double detector = 0.0;              // I_D: flat thermal components
  double other = 0.0;                 // tabulated components
  double detector_closed_form = 0.0;  // 2 Gamma_D <n> summed over flat components
  double mean_occupation = 0.0;

  /// I_cl - I_q - I_D - I_other, zero at the steady state.
  double imbalance() const noexcept { return classical_source - phonon - detector - other; }
};

CurrentReport currents(const OscillatorModel& model, const NoiseModel& noise,
                       const PopulationDistribution& rho);

/// exp(L t) for a birth-death generator. L is similar to the symmetric
/// tridiagonal matrix with off-diagonal sqrt(C_n D_{n+1}); that eigenproblem is
/// used unless the similarity transform is ill-conditioned (estimate > 1e12),
/// in which case an adaptive Dormand-Prince integration takes over.
class PopulationPropagator {
 public:
  explicit PopulationPropagator(RateGenerator generator);

  /// rho0 need not be normalized (regression inputs are not).
  Eigen::VectorXd apply(const Eigen::VectorXd& rho0, double t) const;

  bool uses_integrator() const noexcept { return use_integrator_; }
  double condition_estimate() const noexcept { return condition_; }
  const RateGenerator& generator() const noexcept { return generator_; }
  /// Smallest nonzero relaxation rate (absent when the integrator is used).
  double spectral_gap() const;

  static constexpr double kConditionLimit = 1e12;

 private:
  Eigen::VectorXd integrate(const Eigen::VectorXd& rho0, double t) const;

  RateGenerator generator_;
  bool use_integrator_ = false;
  double condition_ = 1.0;
  Eigen::VectorXd sqrt_weights_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

Eigen::VectorXd evolve_populations(const OscillatorModel& model, const NoiseModel& noise,
                                   const Eigen::VectorXd& rho0, double t);

}  // namespace kerrnoise
