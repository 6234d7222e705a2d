#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "correlations.hpp"
#include "errors.hpp"
#include "generators.hpp"

using namespace kerrnoise;

namespace {

NoiseModel preset_noise() {
  return NoiseModel({NoiseComponent::classical_one_over_f(1e-3), NoiseComponent::super_ohmic_thermal(1e-6, 3.0, 10.0),
                     NoiseComponent::flat_thermal(1e-3, 10.0)},
                    0.01, 50.0);
}

}  // namespace

TEST_CASE("g2(0) of reference distributions") {
  // Geometric: rho_n = (1-q) q^n, truncated far out, g2 = 2.
  std::vector<double> geo;
  const double q = 0.3;
  for (int n = 0; n <= 60; ++n) geo.push_back((1 - q) * std::pow(q, n));
  CHECK(g2_zero(geo) == doctest::Approx(2.0).epsilon(1e-12));

  // Poisson with mean 0.8, g2 = 1.
  std::vector<double> poisson;
  double term = std::exp(-0.8);
  for (int n = 0; n <= 40; ++n) {
    poisson.push_back(term);
    term *= 0.8 / (n + 1);
  }
  CHECK(g2_zero(poisson) == doctest::Approx(1.0).epsilon(1e-12));

  // Fock state |2>: g2 = 1/2.
  CHECK(g2_zero(std::vector<double>{0.0, 0.0, 1.0}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(g2_zero(std::vector<double>{1.0, 0.0}), PhysicsError);
}

TEST_CASE("flat noise gives a geometric state and g2 = 2") {
  gen::Source src(61);
  for (int i = 0; i < 20; ++i) {
    const double ws = src.log_uniform(1e-4, 1e-2), wa = ws * src.uniform(0.05, 0.95);
    // Wide support so that no ladder transition leaves it.
    NoiseModel m({NoiseComponent::tabulated({{0.01, ws, wa}, {1e6, ws, wa}})}, 0.01, 1e6);
    const auto model = OscillatorModel::kerr(src.uniform(1.0, 10.0), src.uniform(0.0, 3.0), 1);
    const int n = choose_truncation(model, m, 1e-16);
    const auto rho = ness(model.with_n_max(n), m);
    const double q = (ws - wa) / (ws + wa);
    INFO("case " << i);
    for (int k = 1; k <= rho.n_max(); ++k) CHECK(gen::rel(rho[k] / rho[k - 1], q) < 1e-12);
    CHECK(std::abs(g2_zero(rho) - 2.0) < 1e-9);
  }
}

TEST_CASE("g2(tau) starts at g2(0) and relaxes to 1") {
  const auto noise = preset_noise();
  const auto model = OscillatorModel::kerr(5.0, 3.0, 6);
  const auto rho = ness(model, noise);
  const PopulationPropagator p(rate_matrix(model, noise));
  std::vector<double> tau{0.0, 10.0, 100.0, 1000.0, 20.0 / p.spectral_gap()};
  const auto s = g2_tau(model, noise, rho, tau, 1.5);
  CHECK(s.values[0].real() == doctest::Approx(g2_zero(rho)).epsilon(1e-13));
  CHECK(std::abs(s.values.back().real() - 1.0) < 1e-6);
  for (std::size_t k = 1; k < tau.size(); ++k) CHECK(s.values[k].real() >= s.values[k - 1].real());
  CHECK(s.outside_validity[0]);
  CHECK_FALSE(s.outside_validity[1]);
}

TEST_CASE("g1 of a damped harmonic oscillator") {
  // chi = 0 with one flat bath: every coherence decays at W_A = gamma and
  // rotates at one shifted frequency, so g1 = <n> e^{-gamma tau - i w~ tau}.
  const double gamma = 2e-3;
  NoiseModel m({NoiseComponent::flat_thermal(gamma, 1.0)}, 0.01, 50.0);
  const auto model = OscillatorModel::kerr(3.0, 0.0, 1);
  const auto full = model.with_n_max(choose_truncation(model, m, 1e-14));
  const auto rho = ness(full, m);
  const std::vector<double> tau{0.0, 0.5, 5.0, 50.0, 400.0};
  const auto g1 = g1_tau(full, m, rho, tau);
  CHECK(std::abs(g1.values[0] - rho.mean()) < 1e-14);
  const double w = -std::arg(g1.values[1]) / tau[1];
  for (std::size_t k = 1; k < tau.size(); ++k) {
    const auto expected = rho.mean() * std::exp(std::complex<double>(-gamma * tau[k], -w * tau[k]));
    CHECK(std::abs(g1.values[k] - expected) < 1e-9 * rho.mean());
  }

  // Its spectrum is one Lorentzian of half width gamma centred on w.
  std::vector<double> omega{w - 0.5, w, w + 0.01};
  const auto s = spectrum(full, m, rho, omega);
  for (std::size_t k = 0; k < omega.size(); ++k) {
    const double d = omega[k] - w;
    CHECK(gen::rel(s.values[k], rho.mean() * gamma / (gamma * gamma + d * d)) < 1e-8);
  }
  REQUIRE(s.peaks.size() == 1);
  CHECK(s.peaks[0].position == doctest::Approx(w).epsilon(1e-9));
  CHECK(s.peaks[0].fwhm == doctest::Approx(2 * gamma).epsilon(1e-6));
}

TEST_CASE("sum rule and exact Lorentzian integral agree") {
  const auto noise = preset_noise();
  for (double omega : {5.0, 20.0}) {
    const auto model = OscillatorModel::kerr(omega, 3.0, 1);
    const auto full = model.with_n_max(choose_truncation(model, noise, 1e-12));
    const auto rho = ness(full, noise);
    auto system = build_coherence_system(full, noise);
    const auto init = system.initial(rho);
    const SpectrumEvaluator eigen(system, init);
    SpectrumOptions forced;
    forced.force_resolvent = true;
    const SpectrumEvaluator resolvent(system, init, forced);
    CHECK(resolvent.method() == SpectrumMethod::Resolvent);
    for (double w : {omega - 1.0, omega, omega + 6.0})
      CHECK(gen::rel(eigen(w), resolvent(w)) < 1e-9);
    const double simpson = spectral_sum_rule(eigen, 0.01, 50.0);
    const double exact = eigen.integral(0.01, 50.0) / std::numbers::pi;
    CHECK(gen::rel(simpson, exact) < 1e-5);
    CHECK(std::abs(exact / rho.mean() - 1.0) < 0.01);
  }
}

TEST_CASE("tau grid validation") {
  const auto noise = preset_noise();
  const auto model = OscillatorModel::kerr(5.0, 3.0, 4);
  const auto rho = ness(model, noise);
  CHECK_THROWS_AS(g2_tau(model, noise, rho, {-1.0}), ConfigError);
  CHECK_THROWS_AS(g1_tau(model, noise, rho, {std::numeric_limits<double>::quiet_NaN()}), ConfigError);
}
