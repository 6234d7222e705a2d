#pragma once

// Run configuration: a sectioned key = value text file, optionally layered
// over a bundled preset and overridden from the command line.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kncli {

/// Bad configuration; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ComponentSpec {
  std::string kind;  // classical_1_over_f | super_ohmic_thermal | flat_thermal | tabulated
  double gamma = 0.0;
  double s = 0.0;
  double beta = 0.0;
  std::filesystem::path file;
};

/// Inclusive grid a:b:n, n >= 1 points.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  std::vector<double> values() const;
  static Range parse(std::string_view text);
};

struct RunConfig {
  // [noise]
  double omega_min = 0.01;
  double omega_max = 50.0;
  std::vector<ComponentSpec> components;  // [noise.component], repeated
  // [oscillator]
  double omega = 5.0;
  double chi = 3.0;
  std::string nonlinearity = "kerr";  // kerr | table
  std::filesystem::path u_table;
  std::optional<int> n_max;  // unset: chosen from tail_tol
  // [numerics]
  double tail_tol = 1e-12;
  int truncation_cap = 512;
  double memory_step = 0.01;
  double memory_horizon = 50.0;
  std::optional<double> memory_threshold;  // unset: sqrt of the weakest detector coupling
  // [sweep]
  Range sweep_chi{0.1, 10.0, 20};
  Range sweep_omega{0.1, 10.0, 20};
  // [g2tau]
  std::optional<double> tau_max;  // unset: ten relaxation times
  int tau_steps = 400;
  // [spectrum]
  std::optional<double> spectrum_lo;
  std::optional<double> spectrum_hi;
  int spectrum_points = 4001;
  // [oracle]
  int oracle_n_max = 6;
  // [output]
  bool plot = false;

  /// Canonical text of every effective setting; input to the config hash.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
};

/// Applies `text` on top of `base`. Relative file paths resolve against
/// `origin_dir`. Unknown sections or keys are errors naming the key. Any
/// [noise.component] section replaces the inherited component list.
RunConfig parse_config(std::string_view text, const std::filesystem::path& origin_dir, RunConfig base,
                       std::string_view source_name);
RunConfig load_config(const std::filesystem::path& path, RunConfig base);

/// paper_fig1: 1/f noise, s = 3 phonons and a flat detector at beta = 10.
/// paper_fig3: the same without phonons.
RunConfig preset(std::string_view name);

double parse_number(std::string_view text, std::string_view what);
int parse_int(std::string_view text, std::string_view what);

}  // namespace kncli
