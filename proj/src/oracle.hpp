#pragma once

// Brute-force reference: the full RWA Redfield generator on the truncated
// density matrix, for validating the reduced population and coherence
// equations. Dense and small only.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "noise_spectra.hpp"
#include "oscillator_model.hpp"

namespace kerrnoise::oracle {

inline constexpr int kMaxLevels = 32;

/// Row-major stacking: vec(X)[i * dim + j] = X(i, j), so that
/// vec(A X B) = (A kron B^T) vec(X).
Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& x);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int dim);

/// Generator of
///   d rho/dt = i[rho, H] - ( [a^dag, G1 a rho] + [rho G2 a, a^dag] + h.c. )
/// with H = sum E_n |n><n|, G1 = F_+(Omega^) + i R_-(Omega^),
/// G2 = F_-(Omega^) + i R_+(Omega^), Omega^|n> = Omega_n |n>, and a truncated
/// at n_max.
struct Liouvillian {
  Eigen::MatrixXcd matrix;
  int n_max = 0;

  int dim() const noexcept { return n_max + 1; }
};

/// Throws ConfigError for n_max > kMaxLevels.
Liouvillian build_liouvillian(const OscillatorModel& model, const NoiseModel& noise, int n_max);

/// Null vector with unit trace.
Eigen::MatrixXcd steady_state(const Liouvillian& l);
Eigen::MatrixXcd evolve(const Liouvillian& l, const Eigen::MatrixXcd& rho0, double t);
Eigen::VectorXcd eigenvalues(const Liouvillian& l);

enum class Ladder { Annihilate, Create, Number };
/// Operator product, leftmost factor first; empty means identity.
using LadderWord = std::vector<Ladder>;

Eigen::MatrixXcd ladder_operator(const LadderWord& word, int dim);

struct RegressionResult {
  std::vector<std::complex<double>> values;
  /// Largest Frobenius norm on the top row and column of rho~(tau), relative
  /// to ||rho~(0)||.
  double leakage = 0.0;
  std::vector<std::string> warnings;
};

/// Tr[observe rho~(tau)] with rho~(0) = left rho right, rho~ evolved by l.
RegressionResult regression_correlator(const Liouvillian& l, const Eigen::MatrixXcd& rho, const LadderWord& left,
                                       const LadderWord& right, const LadderWord& observe,
                                       const std::vector<double>& tau);

/// One-sided transform Re Int_0^inf e^{i w tau} Tr[a rho~(tau)], rho~(0) = rho a^dag.
double spectrum(const Liouvillian& l, const Eigen::MatrixXcd& rho, double omega);

}  // namespace kerrnoise::oracle
