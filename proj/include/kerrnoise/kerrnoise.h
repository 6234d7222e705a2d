/* kerrnoise: nonlinear oscillator driven by classical 1/f noise and quantum
 * baths, in the rotating-wave Redfield description.
 *
 * Every function returns a kn_status. On failure the message of the most
 * recent error on the calling thread is available from kn_last_error_message.
 * Handles are opaque and not synchronized: share one handle across threads
 * only for read-only calls. Strings returned through char** are owned by the
 * caller and released with kn_string_free.
 */
#ifndef KERRNOISE_KERRNOISE_H
#define KERRNOISE_KERRNOISE_H

#include <stddef.h>

#if defined(KERRNOISE_BUILDING_LIBRARY)
#define KN_API __attribute__((visibility("default")))
#else
#define KN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kn_status {
  KN_OK = 0,
  KN_ERR_ARGUMENT = 1, /* null pointer, bad index, short buffer */
  KN_ERR_CONFIG = 2,   /* invalid model parameters or input files */
  KN_ERR_PHYSICS = 3,  /* no normalizable steady state, disconnected ladder */
  KN_ERR_NUMERICS = 4, /* quadrature, integrator or singular evaluation failure */
  KN_ERR_INTERNAL = 5
} kn_status;

typedef enum kn_noise_kind {
  KN_NOISE_CLASSICAL_1_OVER_F = 0,
  KN_NOISE_SUPER_OHMIC_THERMAL = 1,
  KN_NOISE_FLAT_THERMAL = 2,
  KN_NOISE_TABULATED = 3
} kn_noise_kind;

typedef enum kn_shift_part { KN_SHIFT_SYMMETRIC = 0, KN_SHIFT_ANTISYMMETRIC = 1 } kn_shift_part;

typedef struct kn_noise kn_noise;
typedef struct kn_oscillator kn_oscillator;
typedef struct kn_state kn_state;
typedef struct kn_spectrum kn_spectrum;

KN_API const char* kn_version(void);
KN_API const char* kn_last_error_message(void);
KN_API void kn_string_free(char* s);

/* ---- noise ---- */

/* Empty noise model with hard cutoffs 0 < omega_min < omega_max. */
KN_API kn_status kn_noise_create(double omega_min, double omega_max, kn_noise** out);
KN_API void kn_noise_destroy(kn_noise* noise);

KN_API kn_status kn_noise_add_classical_1_over_f(kn_noise* noise, double gamma);
/* beta may be +INFINITY. */
KN_API kn_status kn_noise_add_super_ohmic_thermal(kn_noise* noise, double gamma, double exponent, double beta);
KN_API kn_status kn_noise_add_flat_thermal(kn_noise* noise, double gamma, double beta);
KN_API kn_status kn_noise_add_tabulated(kn_noise* noise, const double* omega, const double* w_s,
                                        const double* w_a, size_t count);
/* Three columns (omega, W_S, W_A); '#' starts a comment. */
KN_API kn_status kn_noise_add_tabulated_file(kn_noise* noise, const char* path);

KN_API kn_status kn_noise_component_count(const kn_noise* noise, size_t* out);
KN_API kn_status kn_noise_component_kind(const kn_noise* noise, size_t index, kn_noise_kind* out);
KN_API kn_status kn_noise_component_gamma(const kn_noise* noise, size_t index, double* out);
/* Construction warnings, one per line (empty string if none). */
KN_API kn_status kn_noise_warnings(const kn_noise* noise, char** out);

/* Totals and single components, zero outside the cutoffs. */
KN_API kn_status kn_noise_eval(const kn_noise* noise, double omega, double* w_s, double* w_a);
KN_API kn_status kn_noise_eval_component(const kn_noise* noise, size_t index, double omega, double* w_s,
                                         double* w_a);
/* W_A / W_S of a thermal component. */
KN_API kn_status kn_noise_kms_ratio(const kn_noise* noise, size_t index, double omega, double* out);

/* Bath correlation C(t) with its quadrature error estimate. */
KN_API kn_status kn_noise_correlation(const kn_noise* noise, double t, double* re, double* im, double* error);
/* C(j * step), j = 0..count-1, from a fixed rule valid up to (count-1)*step. */
KN_API kn_status kn_noise_correlation_series(const kn_noise* noise, double step, size_t count, double* re,
                                             double* im);
KN_API kn_status kn_noise_default_memory_threshold(const kn_noise* noise, double* out);
/* Pass step <= 0 or horizon <= 0 for the defaults (0.01, 50). */
KN_API kn_status kn_noise_memory_time(const kn_noise* noise, double threshold, double step, double horizon,
                                      double* out);
KN_API kn_status kn_principal_value_shift(const kn_noise* noise, double omega0, kn_shift_part part, double* out);

/* ---- oscillator ---- */

KN_API kn_status kn_oscillator_create_kerr(double omega, double chi, int n_max, kn_oscillator** out);
/* u[n] = U(n) for n = 0..count-1; count must be at least n_max + 2. */
KN_API kn_status kn_oscillator_create_table(double omega, double chi, const double* u, size_t count, int n_max,
                                            kn_oscillator** out);
/* Two columns (n, U(n)) with n = 0, 1, 2, ... */
KN_API kn_status kn_oscillator_create_table_file(double omega, double chi, const char* path, int n_max,
                                                 kn_oscillator** out);
KN_API void kn_oscillator_destroy(kn_oscillator* osc);

KN_API kn_status kn_oscillator_n_max(const kn_oscillator* osc, int* out);
KN_API kn_status kn_oscillator_set_n_max(kn_oscillator* osc, int n_max);
KN_API kn_status kn_oscillator_ladder_frequency(const kn_oscillator* osc, int n, double* out);
/* Smallest n_max with rho_{n_max} / max rho < tail_tol; cap <= 0 uses 512. */
KN_API kn_status kn_choose_truncation(const kn_oscillator* osc, const kn_noise* noise, double tail_tol, int cap,
                                      int* out);

/* Dense (n_max+1)^2 rate generator, row-major. */
KN_API kn_status kn_rate_matrix(const kn_oscillator* osc, const kn_noise* noise, double* out, size_t capacity);
/* e^{L t} rho0 for rho0 of length n_max + 1. */
KN_API kn_status kn_evolve_populations(const kn_oscillator* osc, const kn_noise* noise, const double* rho0,
                                       size_t count, double t, double* out);

/* ---- steady state ---- */

typedef struct kn_state_summary {
  int n_max;           /* levels kept, after any support truncation */
  int requested_n_max; /* the oscillator's n_max */
  double mean_n;
  double g2_zero; /* NaN when mean_n = 0 */
  double tail_ratio;
  double i_cl; /* photons injected by the 1/f components */
  double i_q;  /* into super-Ohmic components */
  double i_d;  /* into flat thermal components */
  double i_other;
  double i_d_closed_form; /* 2 Gamma_D <n> */
} kn_state_summary;

KN_API kn_status kn_state_compute(const kn_oscillator* osc, const kn_noise* noise, kn_state** out);
KN_API void kn_state_destroy(kn_state* state);
KN_API kn_status kn_state_summary_get(const kn_state* state, kn_state_summary* out);
/* capacity >= n_max + 1 */
KN_API kn_status kn_state_populations(const kn_state* state, double* out, size_t capacity);
KN_API kn_status kn_state_component_current(const kn_state* state, size_t index, double* out);
KN_API kn_status kn_state_warnings(const kn_state* state, char** out);

/* Slowest nonzero population relaxation rate; 0 when unavailable. */
KN_API kn_status kn_relaxation_gap(const kn_oscillator* osc, const kn_noise* noise, const kn_state* state,
                                   double* out);

/* g2(tau) (real) and g1(tau) (complex) at the steady state. memory_time may be
 * NaN; otherwise outside_validity[i] = 1 marks tau[i] < memory_time.
 * outside_validity may be NULL. */
KN_API kn_status kn_g2_tau(const kn_oscillator* osc, const kn_noise* noise, const kn_state* state,
                           const double* tau, size_t count, double memory_time, double* out,
                           unsigned char* outside_validity);
KN_API kn_status kn_g1_tau(const kn_oscillator* osc, const kn_noise* noise, const kn_state* state,
                           const double* tau, size_t count, double memory_time, double* re, double* im,
                           unsigned char* outside_validity);

/* ---- spectrum ---- */

typedef struct kn_spectrum_options {
  int force_resolvent; /* nonzero: skip the eigenmode expansion */
  double peak_floor;   /* relative; <= 0 uses 1e-10 */
  int without_shifts;  /* nonzero: drop principal-value shifts (diagnostic) */
} kn_spectrum_options;

typedef struct kn_spectrum_info {
  size_t points;
  size_t modes;
  size_t peaks;
  double sum_rule_integral; /* Int S d omega / pi over the noise support */
  double mean_n;
  double condition;
  int method; /* 0 eigenmodes, 1 resolvent */
} kn_spectrum_info;

typedef struct kn_peak {
  double position;
  double height;
  double fwhm;
} kn_peak;

/* options may be NULL. omega must be strictly increasing. */
KN_API kn_status kn_spectrum_compute(const kn_oscillator* osc, const kn_noise* noise, const kn_state* state,
                                     const double* omega, size_t count, const kn_spectrum_options* options,
                                     kn_spectrum** out);
KN_API void kn_spectrum_destroy(kn_spectrum* s);
KN_API kn_status kn_spectrum_info_get(const kn_spectrum* s, kn_spectrum_info* out);
KN_API kn_status kn_spectrum_values(const kn_spectrum* s, double* out, size_t capacity);
KN_API kn_status kn_spectrum_mode(const kn_spectrum* s, size_t index, double* re, double* im);
KN_API kn_status kn_spectrum_peak(const kn_spectrum* s, size_t index, kn_peak* out);
KN_API kn_status kn_spectrum_warnings(const kn_spectrum* s, char** out);

/* ---- oracle ---- */

/* JSON report comparing reduced equations with the dense Liouvillian;
 * n_max <= 32. */
KN_API kn_status kn_oracle_check(const kn_oscillator* osc, const kn_noise* noise, int n_max, char** json,
                                 int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
