#pragma once

// Thin RAII layer over the C interface. Failed calls throw ApiError carrying
// the status so main() can pick the exit code.

#include <kerrnoise/kerrnoise.h>

#include <memory>
#include <stdexcept>
#include <string>

#include "config.hpp"

namespace kncli {

struct ApiError : std::runtime_error {
  ApiError(kn_status s, const std::string& message) : std::runtime_error(message), status(s) {}
  kn_status status;
};

inline void check(kn_status s) {
  if (s != KN_OK) throw ApiError(s, kn_last_error_message());
}

struct NoiseDeleter {
  void operator()(kn_noise* p) const { kn_noise_destroy(p); }
};
struct OscillatorDeleter {
  void operator()(kn_oscillator* p) const { kn_oscillator_destroy(p); }
};
struct StateDeleter {
  void operator()(kn_state* p) const { kn_state_destroy(p); }
};
struct SpectrumDeleter {
  void operator()(kn_spectrum* p) const { kn_spectrum_destroy(p); }
};

using Noise = std::unique_ptr<kn_noise, NoiseDeleter>;
using Oscillator = std::unique_ptr<kn_oscillator, OscillatorDeleter>;
using State = std::unique_ptr<kn_state, StateDeleter>;
using Spectrum = std::unique_ptr<kn_spectrum, SpectrumDeleter>;

/// Takes ownership of a string returned by the library.
std::string take_string(char* s);

Noise make_noise(const RunConfig& cfg);
/// Oscillator at (omega, chi). n_max comes from the config or, when unset,
/// from the truncation rule applied against `noise`.
Oscillator make_oscillator(const RunConfig& cfg, const kn_noise* noise, double omega, double chi);
State make_state(const kn_oscillator* osc, const kn_noise* noise);

/// Configured memory threshold, or the library default for this noise.
double memory_threshold(const RunConfig& cfg, const kn_noise* noise);

}  // namespace kncli
