#include "doctest.h"

#include <kerrnoise/kerrnoise.h>

#include <cmath>
#include <string>
#include <thread>
#include <vector>

namespace {

kn_noise* preset_noise() {
  kn_noise* n = nullptr;
  REQUIRE(kn_noise_create(0.01, 50.0, &n) == KN_OK);
  REQUIRE(kn_noise_add_classical_1_over_f(n, 1e-3) == KN_OK);
  REQUIRE(kn_noise_add_super_ohmic_thermal(n, 1e-6, 3.0, 10.0) == KN_OK);
  REQUIRE(kn_noise_add_flat_thermal(n, 1e-3, 10.0) == KN_OK);
  return n;
}

}  // namespace

TEST_CASE("argument and configuration errors") {
  CHECK(kn_noise_create(0.01, 50.0, nullptr) == KN_ERR_ARGUMENT);
  kn_noise* n = nullptr;
  CHECK(kn_noise_create(5.0, 1.0, &n) == KN_ERR_CONFIG);
  CHECK(n == nullptr);
  CHECK(std::string(kn_last_error_message()).size() > 0);

  n = preset_noise();
  CHECK(kn_noise_add_flat_thermal(n, -1.0, 10.0) == KN_ERR_CONFIG);
  size_t count = 0;
  CHECK(kn_noise_component_count(n, &count) == KN_OK);
  CHECK(count == 3);
  kn_noise_kind kind;
  CHECK(kn_noise_component_kind(n, 7, &kind) == KN_ERR_ARGUMENT);
  CHECK(kn_noise_add_tabulated_file(n, "/nonexistent/table.dat") == KN_ERR_CONFIG);

  kn_oscillator* osc = nullptr;
  CHECK(kn_oscillator_create_kerr(5.0, 3.0, -1, &osc) == KN_ERR_CONFIG);
  REQUIRE(kn_oscillator_create_kerr(5.0, 3.0, 6, &osc) == KN_OK);
  std::vector<double> small(4);
  CHECK(kn_rate_matrix(osc, n, small.data(), small.size()) == KN_ERR_ARGUMENT);
  char* json = nullptr;
  int passed = 0;
  CHECK(kn_oracle_check(osc, n, 40, &json, &passed) == KN_ERR_CONFIG);
  kn_oscillator_destroy(osc);
  kn_noise_destroy(n);
  kn_noise_destroy(nullptr);
}

TEST_CASE("classical-only noise is a physics error") {
  kn_noise* n = nullptr;
  REQUIRE(kn_noise_create(0.01, 50.0, &n) == KN_OK);
  REQUIRE(kn_noise_add_classical_1_over_f(n, 1e-3) == KN_OK);
  kn_oscillator* osc = nullptr;
  REQUIRE(kn_oscillator_create_kerr(5.0, 3.0, 6, &osc) == KN_OK);
  int n_max = 0;
  CHECK(kn_choose_truncation(osc, n, 1e-12, 0, &n_max) == KN_ERR_PHYSICS);
  CHECK(std::string(kn_last_error_message()).find("non-normalizable") != std::string::npos);
  kn_state* state = nullptr;
  CHECK(kn_state_compute(osc, n, &state) == KN_ERR_PHYSICS);
  CHECK(state == nullptr);
  kn_oscillator_destroy(osc);
  kn_noise_destroy(n);
}

TEST_CASE("steady-state round trip") {
  kn_noise* n = preset_noise();
  kn_oscillator* osc = nullptr;
  REQUIRE(kn_oscillator_create_kerr(5.0, 3.0, 1, &osc) == KN_OK);
  int n_max = 0;
  REQUIRE(kn_choose_truncation(osc, n, 1e-12, 0, &n_max) == KN_OK);
  CHECK(n_max == 6);
  REQUIRE(kn_oscillator_set_n_max(osc, n_max) == KN_OK);
  kn_state* state = nullptr;
  REQUIRE(kn_state_compute(osc, n, &state) == KN_OK);
  kn_state_summary s;
  REQUIRE(kn_state_summary_get(state, &s) == KN_OK);
  CHECK(s.n_max == 6);
  CHECK(s.g2_zero < 1.0);
  CHECK(std::abs(s.i_cl - s.i_q - s.i_d - s.i_other) < 1e-10 * s.i_cl);
  std::vector<double> rho(7);
  REQUIRE(kn_state_populations(state, rho.data(), rho.size()) == KN_OK);
  double total = 0.0, mean = 0.0;
  for (size_t k = 0; k < rho.size(); ++k) total += rho[k], mean += static_cast<double>(k) * rho[k];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mean == doctest::Approx(s.mean_n).epsilon(1e-14));
  CHECK(kn_state_populations(state, rho.data(), 3) == KN_ERR_ARGUMENT);

  char* warnings = nullptr;
  REQUIRE(kn_state_warnings(state, &warnings) == KN_OK);
  CHECK(std::string(warnings).empty());
  kn_string_free(warnings);

  const double tau[2] = {0.0, 1e5};
  double g2[2];
  REQUIRE(kn_g2_tau(osc, n, state, tau, 2, NAN, g2, nullptr) == KN_OK);
  CHECK(g2[0] == doctest::Approx(s.g2_zero));
  CHECK(std::abs(g2[1] - 1.0) < 1e-9);

  const double omega[3] = {4.9, 4.975, 5.05};
  kn_spectrum* spec = nullptr;
  REQUIRE(kn_spectrum_compute(osc, n, state, omega, 3, nullptr, &spec) == KN_OK);
  kn_spectrum_info info;
  REQUIRE(kn_spectrum_info_get(spec, &info) == KN_OK);
  CHECK(info.points == 3);
  CHECK(info.modes == 6);
  CHECK(std::abs(info.sum_rule_integral / info.mean_n - 1.0) < 0.01);
  kn_peak peak;
  CHECK(kn_spectrum_peak(spec, info.peaks, &peak) == KN_ERR_ARGUMENT);
  kn_spectrum_destroy(spec);
  const double backwards[2] = {5.0, 4.0};
  CHECK(kn_spectrum_compute(osc, n, state, backwards, 2, nullptr, &spec) == KN_ERR_CONFIG);

  kn_state_destroy(state);
  kn_oscillator_destroy(osc);
  kn_noise_destroy(n);
}

TEST_CASE("last error message is per thread") {
  kn_noise* n = nullptr;
  CHECK(kn_noise_create(5.0, 1.0, &n) == KN_ERR_CONFIG);
  const std::string here = kn_last_error_message();
  std::string there;
  std::thread t([&] {
    kn_oscillator* osc = nullptr;
    (void)kn_oscillator_create_kerr(-1.0, 0.0, 2, &osc);
    there = kn_last_error_message();
  });
  t.join();
  CHECK(here == kn_last_error_message());
  CHECK(here != there);
}

TEST_CASE("version string") { CHECK(std::string(kn_version()).find('.') != std::string::npos); }
