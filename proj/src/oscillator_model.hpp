#pragma once

// RWA nonlinear oscillator H_S = Omega n + chi U(n) on a truncated Fock space.

#include <filesystem>
#include <vector>

#include "noise_spectra.hpp"

namespace kerrnoise {

enum class Nonlinearity { Kerr, CustomTable };

class OscillatorModel {
 public:
  /// U(n) = n(n-1), so the ladder frequencies are Omega + 2 chi n.
  static OscillatorModel kerr(double omega, double chi, int n_max);
  /// `u` holds U(0), U(1), ...; it must cover U(n_max + 1).
  static OscillatorModel custom(double omega, double chi, std::vector<double> u, int n_max);
  /// Two-column file (n, U(n)) with n = 0, 1, 2, ... in order.
  static std::vector<double> load_u_table(const std::filesystem::path& path);

  double omega() const noexcept { return omega_; }
  double chi() const noexcept { return chi_; }
  int n_max() const noexcept { return n_max_; }
  Nonlinearity nonlinearity() const noexcept { return nonlinearity_; }
  const std::vector<double>& u_table() const noexcept { return u_; }

  /// Largest n_max the nonlinearity can support (unbounded for Kerr).
  int max_supported_n_max() const noexcept;
  /// Copy with a different truncation; validates the new ladder.
  OscillatorModel with_n_max(int n_max) const;

  double u(int n) const;
  /// Energy Omega n + chi U(n).
  double energy(int n) const;
  /// Omega_n = Omega + chi [U(n+1) - U(n)], the frequency of the n -> n+1
  /// transition, for 0 <= n <= n_max.
  double ladder_frequency(int n) const;

 private:
  OscillatorModel(double omega, double chi, Nonlinearity kind, std::vector<double> u, int n_max);
  double ladder_frequency_unchecked(int n) const;

  double omega_;
  double chi_;
  Nonlinearity nonlinearity_;
  std::vector<double> u_;
  int n_max_;
};

inline constexpr int kDefaultTruncationCap = 512;

/// Smallest n_max whose top level carries rho_{n_max} / max_n rho_n < tail_tol
/// according to the steady-state product formula. If the ladder is cut by the
/// noise support first, returns the last reachable level. Throws PhysicsError
/// when `cap` is reached (state too hot for a weak-coupling truncation).
int choose_truncation(const OscillatorModel& model, const NoiseModel& noise, double tail_tol,
                      int cap = kDefaultTruncationCap);

}  // namespace kerrnoise
