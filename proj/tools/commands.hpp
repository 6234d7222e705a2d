#pragma once

#include <filesystem>
#include <iosfwd>

#include "config.hpp"

namespace kncli {

struct RunContext {
  RunConfig config;
  std::filesystem::path out_dir = ".";
  int threads = 1;
  bool force_resolvent = false;
  bool without_shifts = false;
  std::ostream* log = nullptr;  // human-readable progress; may be null
};

// Each command writes its files under out_dir and returns the process exit
// code. Library failures propagate as ApiError, config problems as ConfigError.
int cmd_noise_show(const RunContext& ctx);
int cmd_ness(const RunContext& ctx);
int cmd_sweep(const RunContext& ctx);
int cmd_g2tau(const RunContext& ctx);
int cmd_spectrum(const RunContext& ctx);
int cmd_oracle_check(const RunContext& ctx);

}  // namespace kncli
