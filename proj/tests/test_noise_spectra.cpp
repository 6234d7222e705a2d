#include "doctest.h"

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "errors.hpp"
#include "generators.hpp"
#include "noise_spectra.hpp"

using namespace kerrnoise;

TEST_CASE("thermal components satisfy KMS") {
  gen::Source src(11);
  for (int i = 0; i < 200; ++i) {
    const double beta = src.log_uniform(0.1, 100.0), w = src.log_uniform(0.01, 50.0);
    const auto flat = NoiseComponent::flat_thermal(1e-3, beta);
    const auto phonon = NoiseComponent::super_ohmic_thermal(1e-6, src.uniform(1.0, 4.0), beta);
    CHECK(std::abs(kms_check(flat, w) - std::tanh(beta * w / 2)) < 1e-13);
    CHECK(std::abs(kms_check(phonon, w) - std::tanh(beta * w / 2)) < 1e-13);
  }
}

TEST_CASE("rate pair matches W_S -/+ W_A without cancellation") {
  const auto hot = NoiseComponent::flat_thermal(2e-3, 0.5);
  const auto v = hot.evaluate(3.0);
  const auto r = hot.rates(3.0);
  CHECK(r.raise == doctest::Approx(v.symmetric - v.antisymmetric).epsilon(1e-12));
  CHECK(r.lower == doctest::Approx(v.symmetric + v.antisymmetric).epsilon(1e-12));

  // beta w = 400: the difference underflows in W_S - W_A but not in closed form.
  const auto cold = NoiseComponent::flat_thermal(1e-3, 100.0);
  const auto rc = cold.rates(4.0);
  CHECK(rc.raise > 0.0);
  CHECK(rc.raise / rc.lower == doctest::Approx(std::exp(-400.0)).epsilon(1e-10));

  const auto zero_t = NoiseComponent::flat_thermal(1e-3, std::numeric_limits<double>::infinity());
  CHECK(zero_t.rates(1.0).raise == 0.0);
  CHECK(zero_t.rates(1.0).lower == doctest::Approx(2e-3));
}

TEST_CASE("classical 1/f has no antisymmetric part") {
  const auto c = NoiseComponent::classical_one_over_f(1e-3);
  CHECK(c.is_classical());
  for (double w : {0.01, 0.3, 7.0, 50.0}) {
    CHECK(c.evaluate(w).antisymmetric == 0.0);
    CHECK(c.evaluate(w).symmetric == doctest::Approx(1e-3 / w));
  }
}

TEST_CASE("cutoffs zero the total spectrum") {
  NoiseModel m({NoiseComponent::flat_thermal(1e-3, 10.0)}, 0.5, 20.0);
  CHECK(m.eval_total(0.49).symmetric == 0.0);
  CHECK(m.eval_total(20.01).antisymmetric == 0.0);
  CHECK(m.eval_total(1.0).antisymmetric == doctest::Approx(1e-3));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(NoiseComponent::flat_thermal(-1.0, 10.0), ConfigError);
  CHECK_THROWS_AS(NoiseComponent::super_ohmic_thermal(1e-6, 3.0, -1.0), ConfigError);
  CHECK_THROWS_AS(NoiseModel({}, 2.0, 1.0), ConfigError);
  CHECK_THROWS_AS(NoiseModel({}, 0.0, 1.0), ConfigError);
}

TEST_CASE("tabulated spectra reproduce nodes and vanish outside") {
  std::vector<TablePoint> t{{1.0, 2.0, 1.0}, {2.0, 1.0, 0.5}, {4.0, 0.25, 0.125}};
  const auto c = NoiseComponent::tabulated(t);
  for (const auto& p : t) {
    CHECK(c.evaluate(p.omega).symmetric == doctest::Approx(p.symmetric));
    CHECK(c.evaluate(p.omega).antisymmetric == doctest::Approx(p.antisymmetric));
  }
  // A power law between nodes is reproduced by log-log interpolation.
  CHECK(c.evaluate(std::sqrt(2.0)).symmetric == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(c.evaluate(0.5).symmetric == 0.0);
  CHECK(c.evaluate(5.0).antisymmetric == 0.0);
}

TEST_CASE("tabulated file loader") {
  const auto path = std::filesystem::temp_directory_path() / "kerrnoise_table_test.dat";
  {
    std::ofstream out(path);
    out << "# omega WS WA\n1 2 1\n2 1 0.5  # inline\n\n4 0.25 0.125\n";
  }
  const auto c = NoiseComponent::load_table(path);
  CHECK(c.table().size() == 3);
  CHECK(c.evaluate(2.0).symmetric == doctest::Approx(1.0));
  {
    std::ofstream out(path);
    out << "1 2\n";
  }
  CHECK_THROWS_AS(NoiseComponent::load_table(path), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("correlation function of a zero-temperature flat bath") {
  // W_S = W_A = g on [a, b]: C(t) = (g / pi) (e^{-iat} - e^{-ibt}) / (i t).
  const double g = 1e-3, a = 0.01, b = 50.0;
  NoiseModel m({NoiseComponent::flat_thermal(g, std::numeric_limits<double>::infinity())}, a, b);
  const std::complex<double> i(0.0, 1.0);
  for (double t : {0.05, 0.7, 2.0, 13.0, 40.0}) {
    const auto exact = g / std::numbers::pi * (std::exp(-i * a * t) - std::exp(-i * b * t)) / (i * t);
    const auto c = correlation_function(m, t);
    CHECK(std::abs(c.value - exact) < 1e-12);
    const CorrelationSampler sampler(m, 50.0);
    CHECK(std::abs(sampler(t) - exact) < 1e-11);
  }
  CHECK(std::abs(correlation_function(m, 0.0).value - g * (b - a) / std::numbers::pi) < 1e-12);
}

TEST_CASE("memory time brackets the threshold crossing") {
  NoiseModel m({NoiseComponent::classical_one_over_f(1e-3), NoiseComponent::super_ohmic_thermal(1e-6, 3.0, 10.0),
                NoiseComponent::flat_thermal(1e-3, 10.0)},
               0.01, 50.0);
  const double thr = default_memory_threshold(m);
  CHECK(thr == doctest::Approx(std::sqrt(1e-3)));
  const double tm = memory_time(m, thr);
  REQUIRE(tm > 0.01);
  CHECK(std::abs(correlation_function(m, tm).value) < thr);
  CHECK(std::abs(correlation_function(m, tm - 0.01).value) >= thr);
  // Lower thresholds never shorten the memory time.
  CHECK(memory_time(m, thr / 3) >= tm);
  NoiseModel classical({NoiseComponent::classical_one_over_f(1e-3)}, 0.01, 50.0);
  CHECK_THROWS_AS(default_memory_threshold(classical), ConfigError);
}
