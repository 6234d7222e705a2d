#pragma once

// Pass/fail comparison of the reduced equations against the dense oracle.

#include <string>
#include <vector>

#include "noise_spectra.hpp"
#include "oscillator_model.hpp"

namespace kerrnoise {

struct OracleCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct OracleReport {
  int n_max = 0;  // after any support truncation of the ladder
  std::vector<OracleCheck> checks;
  std::vector<std::string> warnings;

  bool all_passed() const;
  std::string to_json() const;
};

/// Steady state, generator structure, g2(tau), g1(tau) and S(omega) (both
/// evaluation paths) on a ladder truncated at n_max <= 32.
OracleReport run_oracle_check(const OscillatorModel& model, const NoiseModel& noise, int n_max);

}  // namespace kerrnoise
