#include "kerrnoise/kerrnoise.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "correlations.hpp"
#include "errors.hpp"
#include "noise_spectra.hpp"
#include "oracle_check.hpp"
#include "oscillator_model.hpp"
#include "redfield.hpp"

using namespace kerrnoise;

struct kn_noise {
  std::vector<NoiseComponent> components;
  NoiseModel model;
};

struct kn_oscillator {
  OscillatorModel model;
};

struct kn_state {
  PopulationDistribution rho;
  CurrentReport currents;
  double g2 = std::numeric_limits<double>::quiet_NaN();
};

struct kn_spectrum {
  SpectrumResult result;
};

namespace {

thread_local std::string last_error;

kn_status fail(kn_status code, std::string message) {
  last_error = std::move(message);
  return code;
}

template <class F>
kn_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return KN_OK;
  } catch (const Error& e) {
    return fail(static_cast<kn_status>(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(KN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(KN_ERR_INTERNAL, e.what());
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) {
    if (!s.empty()) s += '\n';
    s += l;
  }
  return s;
}

void add_component(kn_noise* noise, NoiseComponent c) {
  auto components = noise->components;
  components.push_back(std::move(c));
  noise->model = NoiseModel(components, noise->model.omega_min(), noise->model.omega_max());
  noise->components = std::move(components);
}

}  // namespace

// Null handles and out-of-range indices are argument errors, distinct from
// model configuration errors.
#define KN_REQUIRE(cond, msg) \
  do {                        \
    if (!(cond)) return fail(KN_ERR_ARGUMENT, msg); \
  } while (0)

extern "C" {

const char* kn_version(void) { return KERRNOISE_VERSION; }

const char* kn_last_error_message(void) { return last_error.c_str(); }

void kn_string_free(char* s) { std::free(s); }

kn_status kn_noise_create(double omega_min, double omega_max, kn_noise** out) {
  KN_REQUIRE(out, "null output pointer");
  return guarded([&] { *out = new kn_noise{{}, NoiseModel({}, omega_min, omega_max)}; });
}

void kn_noise_destroy(kn_noise* noise) { delete noise; }

kn_status kn_noise_add_classical_1_over_f(kn_noise* noise, double gamma) {
  KN_REQUIRE(noise, "null noise handle");
  return guarded([&] { add_component(noise, NoiseComponent::classical_one_over_f(gamma)); });
}

kn_status kn_noise_add_super_ohmic_thermal(kn_noise* noise, double gamma, double exponent, double beta) {
  KN_REQUIRE(noise, "null noise handle");
  return guarded([&] { add_component(noise, NoiseComponent::super_ohmic_thermal(gamma, exponent, beta)); });
}

kn_status kn_noise_add_flat_thermal(kn_noise* noise, double gamma, double beta) {
  KN_REQUIRE(noise, "null noise handle");
  return guarded([&] { add_component(noise, NoiseComponent::flat_thermal(gamma, beta)); });
}

kn_status kn_noise_add_tabulated(kn_noise* noise, const double* omega, const double* w_s, const double* w_a,
                                 size_t count) {
  KN_REQUIRE(noise && omega && w_s && w_a, "null argument");
  return guarded([&] {
    std::vector<TablePoint> table;
    for (size_t i = 0; i < count; ++i) table.push_back({omega[i], w_s[i], w_a[i]});
    add_component(noise, NoiseComponent::tabulated(std::move(table)));
  });
}

kn_status kn_noise_add_tabulated_file(kn_noise* noise, const char* path) {
  KN_REQUIRE(noise && path, "null argument");
  return guarded([&] { add_component(noise, NoiseComponent::load_table(path)); });
}

kn_status kn_noise_component_count(const kn_noise* noise, size_t* out) {
  KN_REQUIRE(noise && out, "null argument");
  *out = noise->components.size();
  return KN_OK;
}

kn_status kn_noise_component_kind(const kn_noise* noise, size_t index, kn_noise_kind* out) {
  KN_REQUIRE(noise && out, "null argument");
  KN_REQUIRE(index < noise->components.size(), "component index out of range");
  *out = static_cast<kn_noise_kind>(noise->components[index].kind());
  return KN_OK;
}

kn_status kn_noise_component_gamma(const kn_noise* noise, size_t index, double* out) {
  KN_REQUIRE(noise && out, "null argument");
  KN_REQUIRE(index < noise->components.size(), "component index out of range");
  *out = noise->components[index].gamma();
  return KN_OK;
}

kn_status kn_noise_warnings(const kn_noise* noise, char** out) {
  KN_REQUIRE(noise && out, "null argument");
  return guarded([&] {
    std::vector<std::string> all;
    for (const auto& c : noise->components) all.insert(all.end(), c.warnings().begin(), c.warnings().end());
    *out = duplicate(join_lines(all));
  });
}

kn_status kn_noise_eval(const kn_noise* noise, double omega, double* w_s, double* w_a) {
  KN_REQUIRE(noise && w_s && w_a, "null argument");
  return guarded([&] {
    const auto v = noise->model.eval_total(omega);
    *w_s = v.symmetric;
    *w_a = v.antisymmetric;
  });
}

kn_status kn_noise_eval_component(const kn_noise* noise, size_t index, double omega, double* w_s, double* w_a) {
  KN_REQUIRE(noise && w_s && w_a, "null argument");
  KN_REQUIRE(index < noise->components.size(), "component index out of range");
  return guarded([&] {
    const auto v = noise->model.eval_component(index, omega);
    *w_s = v.symmetric;
    *w_a = v.antisymmetric;
  });
}

kn_status kn_noise_kms_ratio(const kn_noise* noise, size_t index, double omega, double* out) {
  KN_REQUIRE(noise && out, "null argument");
  KN_REQUIRE(index < noise->components.size(), "component index out of range");
  return guarded([&] { *out = kms_check(noise->components[index], omega); });
}

kn_status kn_noise_correlation(const kn_noise* noise, double t, double* re, double* im, double* error) {
  KN_REQUIRE(noise && re && im, "null argument");
  return guarded([&] {
    const auto c = correlation_function(noise->model, t);
    *re = c.value.real();
    *im = c.value.imag();
    if (error) *error = c.error_estimate;
  });
}

kn_status kn_noise_correlation_series(const kn_noise* noise, double step, size_t count, double* re, double* im) {
  KN_REQUIRE(noise && re && im, "null argument");
  KN_REQUIRE(count > 0 && step > 0.0, "need count > 0 and step > 0");
  return guarded([&] {
    const CorrelationSampler sampler(noise->model, step * static_cast<double>(count - 1));
    const auto values = sampler.uniform(step, count);
    for (size_t i = 0; i < count; ++i) {
      re[i] = values[i].real();
      im[i] = values[i].imag();
    }
  });
}

kn_status kn_noise_default_memory_threshold(const kn_noise* noise, double* out) {
  KN_REQUIRE(noise && out, "null argument");
  return guarded([&] { *out = default_memory_threshold(noise->model); });
}

kn_status kn_noise_memory_time(const kn_noise* noise, double threshold, double step, double horizon, double* out) {
  KN_REQUIRE(noise && out, "null argument");
  return guarded([&] {
    MemoryTimeOptions opts;
    if (step > 0.0) opts.step = step;
    if (horizon > 0.0) opts.horizon = horizon;
    *out = memory_time(noise->model, threshold, opts);
  });
}

kn_status kn_principal_value_shift(const kn_noise* noise, double omega0, kn_shift_part part, double* out) {
  KN_REQUIRE(noise && out, "null argument");
  KN_REQUIRE(part == KN_SHIFT_SYMMETRIC || part == KN_SHIFT_ANTISYMMETRIC, "unknown shift part");
  return guarded([&] {
    *out = principal_value_shift(noise->model, omega0,
                                 part == KN_SHIFT_SYMMETRIC ? ShiftPart::Symmetric : ShiftPart::Antisymmetric);
  });
}

kn_status kn_oscillator_create_kerr(double omega, double chi, int n_max, kn_oscillator** out) {
  KN_REQUIRE(out, "null output pointer");
  return guarded([&] { *out = new kn_oscillator{OscillatorModel::kerr(omega, chi, n_max)}; });
}

kn_status kn_oscillator_create_table(double omega, double chi, const double* u, size_t count, int n_max,
                                     kn_oscillator** out) {
  KN_REQUIRE(out && u, "null argument");
  return guarded([&] {
    *out = new kn_oscillator{OscillatorModel::custom(omega, chi, std::vector<double>(u, u + count), n_max)};
  });
}

kn_status kn_oscillator_create_table_file(double omega, double chi, const char* path, int n_max,
                                          kn_oscillator** out) {
  KN_REQUIRE(out && path, "null argument");
  return guarded([&] {
    *out = new kn_oscillator{OscillatorModel::custom(omega, chi, OscillatorModel::load_u_table(path), n_max)};
  });
}

void kn_oscillator_destroy(kn_oscillator* osc) { delete osc; }

kn_status kn_oscillator_n_max(const kn_oscillator* osc, int* out) {
  KN_REQUIRE(osc && out, "null argument");
  *out = osc->model.n_max();
  return KN_OK;
}

kn_status kn_oscillator_set_n_max(kn_oscillator* osc, int n_max) {
  KN_REQUIRE(osc, "null oscillator handle");
  return guarded([&] { osc->model = osc->model.with_n_max(n_max); });
}

kn_status kn_oscillator_ladder_frequency(const kn_oscillator* osc, int n, double* out) {
  KN_REQUIRE(osc && out, "null argument");
  return guarded([&] { *out = osc->model.ladder_frequency(n); });
}

kn_status kn_choose_truncation(const kn_oscillator* osc, const kn_noise* noise, double tail_tol, int cap,
                               int* out) {
  KN_REQUIRE(osc && noise && out, "null argument");
  return guarded([&] {
    *out = choose_truncation(osc->model, noise->model, tail_tol, cap > 0 ? cap : kDefaultTruncationCap);
  });
}

kn_status kn_rate_matrix(const kn_oscillator* osc, const kn_noise* noise, double* out, size_t capacity) {
  KN_REQUIRE(osc && noise && out, "null argument");
  const auto dim = static_cast<size_t>(osc->model.n_max()) + 1;
  KN_REQUIRE(capacity >= dim * dim, "output buffer too small");
  return guarded([&] {
    const Eigen::MatrixXd m = rate_matrix(osc->model, noise->model).dense();
    for (size_t i = 0; i < dim; ++i)
      for (size_t j = 0; j < dim; ++j) out[i * dim + j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

kn_status kn_evolve_populations(const kn_oscillator* osc, const kn_noise* noise, const double* rho0, size_t count,
                                double t, double* out) {
  KN_REQUIRE(osc && noise && rho0 && out, "null argument");
  KN_REQUIRE(count == static_cast<size_t>(osc->model.n_max()) + 1, "rho0 length must be n_max + 1");
  return guarded([&] {
    const Eigen::VectorXd start = Eigen::Map<const Eigen::VectorXd>(rho0, static_cast<Eigen::Index>(count));
    const Eigen::VectorXd end = evolve_populations(osc->model, noise->model, start, t);
    for (size_t i = 0; i < count; ++i) out[i] = end[static_cast<Eigen::Index>(i)];
  });
}

kn_status kn_state_compute(const kn_oscillator* osc, const kn_noise* noise, kn_state** out) {
  KN_REQUIRE(osc && noise && out, "null argument");
  return guarded([&] {
    auto rho = ness(osc->model, noise->model);
    auto cur = currents(osc->model, noise->model, rho);
    const double g2 = rho.mean() > 0.0 ? g2_zero(rho) : std::numeric_limits<double>::quiet_NaN();
    *out = new kn_state{std::move(rho), std::move(cur), g2};
  });
}

void kn_state_destroy(kn_state* state) { delete state; }

kn_status kn_state_summary_get(const kn_state* state, kn_state_summary* out) {
  KN_REQUIRE(state && out, "null argument");
  out->n_max = state->rho.n_max();
  out->requested_n_max = state->rho.requested_n_max;
  out->mean_n = state->rho.mean();
  out->g2_zero = state->g2;
  out->tail_ratio = state->rho.tail_ratio;
  out->i_cl = state->currents.classical_source;
  out->i_q = state->currents.phonon;
  out->i_d = state->currents.detector;
  out->i_other = state->currents.other;
  out->i_d_closed_form = state->currents.detector_closed_form;
  return KN_OK;
}

kn_status kn_state_populations(const kn_state* state, double* out, size_t capacity) {
  KN_REQUIRE(state && out, "null argument");
  KN_REQUIRE(capacity >= state->rho.probabilities.size(), "output buffer too small");
  std::copy(state->rho.probabilities.begin(), state->rho.probabilities.end(), out);
  return KN_OK;
}

kn_status kn_state_component_current(const kn_state* state, size_t index, double* out) {
  KN_REQUIRE(state && out, "null argument");
  KN_REQUIRE(index < state->currents.per_component.size(), "component index out of range");
  *out = state->currents.per_component[index];
  return KN_OK;
}

kn_status kn_state_warnings(const kn_state* state, char** out) {
  KN_REQUIRE(state && out, "null argument");
  return guarded([&] { *out = duplicate(join_lines(state->rho.warnings)); });
}

kn_status kn_relaxation_gap(const kn_oscillator* osc, const kn_noise* noise, const kn_state* state, double* out) {
  KN_REQUIRE(osc && noise && state && out, "null argument");
  return guarded([&] {
    const PopulationPropagator p(rate_matrix(osc->model.with_n_max(state->rho.n_max()), noise->model));
    *out = p.spectral_gap();
  });
}

kn_status kn_g2_tau(const kn_oscillator* osc, const kn_noise* noise, const kn_state* state, const double* tau,
                    size_t count, double memory_time, double* out, unsigned char* outside_validity) {
  KN_REQUIRE(osc && noise && state && tau && out, "null argument");
  return guarded([&] {
    const auto s = g2_tau(osc->model, noise->model, state->rho, std::vector<double>(tau, tau + count), memory_time);
    for (size_t i = 0; i < count; ++i) {
      out[i] = s.values[i].real();
      if (outside_validity) outside_validity[i] = s.outside_validity[i] ? 1 : 0;
    }
  });
}

kn_status kn_g1_tau(const kn_oscillator* osc, const kn_noise* noise, const kn_state* state, const double* tau,
                    size_t count, double memory_time, double* re, double* im, unsigned char* outside_validity) {
  KN_REQUIRE(osc && noise && state && tau && re && im, "null argument");
  return guarded([&] {
    const auto s = g1_tau(osc->model, noise->model, state->rho, std::vector<double>(tau, tau + count), memory_time);
    for (size_t i = 0; i < count; ++i) {
      re[i] = s.values[i].real();
      im[i] = s.values[i].imag();
      if (outside_validity) outside_validity[i] = s.outside_validity[i] ? 1 : 0;
    }
  });
}

kn_status kn_spectrum_compute(const kn_oscillator* osc, const kn_noise* noise, const kn_state* state,
                              const double* omega, size_t count, const kn_spectrum_options* options,
                              kn_spectrum** out) {
  KN_REQUIRE(osc && noise && state && omega && out, "null argument");
  return guarded([&] {
    SpectrumOptions opts;
    if (options) {
      opts.force_resolvent = options->force_resolvent != 0;
      if (options->peak_floor > 0.0) opts.peak_floor = options->peak_floor;
      opts.with_shifts = options->without_shifts == 0;
    }
    auto result = spectrum(osc->model, noise->model, state->rho, std::vector<double>(omega, omega + count), opts);
    *out = new kn_spectrum{std::move(result)};
  });
}

void kn_spectrum_destroy(kn_spectrum* s) { delete s; }

kn_status kn_spectrum_info_get(const kn_spectrum* s, kn_spectrum_info* out) {
  KN_REQUIRE(s && out, "null argument");
  out->points = s->result.values.size();
  out->modes = s->result.eigenvalues.size();
  out->peaks = s->result.peaks.size();
  out->sum_rule_integral = s->result.sum_rule_integral;
  out->mean_n = s->result.mean_occupation;
  out->condition = s->result.condition;
  out->method = s->result.method == SpectrumMethod::Eigenmodes ? 0 : 1;
  return KN_OK;
}

kn_status kn_spectrum_values(const kn_spectrum* s, double* out, size_t capacity) {
  KN_REQUIRE(s && out, "null argument");
  KN_REQUIRE(capacity >= s->result.values.size(), "output buffer too small");
  std::copy(s->result.values.begin(), s->result.values.end(), out);
  return KN_OK;
}

kn_status kn_spectrum_mode(const kn_spectrum* s, size_t index, double* re, double* im) {
  KN_REQUIRE(s && re && im, "null argument");
  KN_REQUIRE(index < s->result.eigenvalues.size(), "mode index out of range");
  *re = s->result.eigenvalues[index].real();
  *im = s->result.eigenvalues[index].imag();
  return KN_OK;
}

kn_status kn_spectrum_peak(const kn_spectrum* s, size_t index, kn_peak* out) {
  KN_REQUIRE(s && out, "null argument");
  KN_REQUIRE(index < s->result.peaks.size(), "peak index out of range");
  const auto& p = s->result.peaks[index];
  *out = {p.position, p.height, p.fwhm};
  return KN_OK;
}

kn_status kn_spectrum_warnings(const kn_spectrum* s, char** out) {
  KN_REQUIRE(s && out, "null argument");
  return guarded([&] { *out = duplicate(join_lines(s->result.warnings)); });
}

kn_status kn_oracle_check(const kn_oscillator* osc, const kn_noise* noise, int n_max, char** json,
                          int* all_passed) {
  KN_REQUIRE(osc && noise && json, "null argument");
  return guarded([&] {
    const auto report = run_oracle_check(osc->model, noise->model, n_max);
    *json = duplicate(report.to_json());
    if (all_passed) *all_passed = report.all_passed() ? 1 : 0;
  });
}

}  // extern "C"
