#include "api.hpp"

namespace kncli {

std::string take_string(char* s) {
  std::string out = s ? s : "";
  kn_string_free(s);
  return out;
}

Noise make_noise(const RunConfig& cfg) {
  kn_noise* raw = nullptr;
  check(kn_noise_create(cfg.omega_min, cfg.omega_max, &raw));
  Noise noise(raw);
  for (const auto& c : cfg.components) {
    if (c.kind == "classical_1_over_f") check(kn_noise_add_classical_1_over_f(raw, c.gamma));
    else if (c.kind == "super_ohmic_thermal") check(kn_noise_add_super_ohmic_thermal(raw, c.gamma, c.s, c.beta));
    else if (c.kind == "flat_thermal") check(kn_noise_add_flat_thermal(raw, c.gamma, c.beta));
    else check(kn_noise_add_tabulated_file(raw, c.file.c_str()));
  }
  return noise;
}

Oscillator make_oscillator(const RunConfig& cfg, const kn_noise* noise, double omega, double chi) {
  kn_oscillator* raw = nullptr;
  // Built with a provisional ladder, then resized once the truncation is known.
  const int provisional = cfg.n_max.value_or(1);
  if (cfg.nonlinearity == "table") check(kn_oscillator_create_table_file(omega, chi, cfg.u_table.c_str(), provisional, &raw));
  else check(kn_oscillator_create_kerr(omega, chi, provisional, &raw));
  Oscillator osc(raw);
  if (!cfg.n_max) {
    int n = 0;
    check(kn_choose_truncation(raw, noise, cfg.tail_tol, cfg.truncation_cap, &n));
    check(kn_oscillator_set_n_max(raw, n));
  }
  return osc;
}

State make_state(const kn_oscillator* osc, const kn_noise* noise) {
  kn_state* raw = nullptr;
  check(kn_state_compute(osc, noise, &raw));
  return State(raw);
}

double memory_threshold(const RunConfig& cfg, const kn_noise* noise) {
  if (cfg.memory_threshold) return *cfg.memory_threshold;
  double t = 0.0;
  check(kn_noise_default_memory_threshold(noise, &t));
  return t;
}

}  // namespace kncli
