#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "errors.hpp"
#include "generators.hpp"
#include "redfield.hpp"

using namespace kerrnoise;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Two levels with C_0 = 2, D_1 = 4: d rho/dt = [-2 4; 2 -4] rho.
RateGenerator two_level() {
  RateGenerator g;
  g.raise = {2.0, 0.0};
  g.lower = {0.0, 4.0};
  return g;
}

// Null vector of the dense generator by LU, independent of the product formula.
Eigen::VectorXd null_vector(const Eigen::MatrixXd& l) {
  const Eigen::Index n = l.rows();
  Eigen::MatrixXd a = l;
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  return a.fullPivLu().solve(b);
}

}  // namespace

TEST_CASE("two-level generator") {
  const auto g = two_level();
  Eigen::MatrixXd expected(2, 2);
  expected << -2, 4, 2, -4;
  CHECK((g.dense() - expected).norm() == 0.0);

  const PopulationPropagator p(g);
  Eigen::VectorXd rho0(2);
  rho0 << 1.0, 0.0;
  for (double t : {0.0, 0.1, 0.5, 2.0}) {
    const auto rho = p.apply(rho0, t);
    CHECK(rho(1) == doctest::Approx((1.0 - std::exp(-6.0 * t)) / 3.0).epsilon(1e-13));
    CHECK(rho.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(p.spectral_gap() == doctest::Approx(6.0));
  const auto late = p.apply(rho0, 50.0);
  CHECK(late(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("principal value shifts of a zero-temperature flat bath") {
  // W_S = W_A = g on [a, b]:
  //   R_S = g/2pi [ln((w0+b)/(w0+a)) + ln|(w0-a)/(w0-b)|]
  //   R_A = g/2pi [ln((w0+b)/(w0+a)) - ln|(w0-a)/(w0-b)|]
  gen::Source src(21);
  for (int i = 0; i < 100; ++i) {
    const double a = src.log_uniform(0.005, 0.5), b = src.uniform(5.0, 80.0), g = src.log_uniform(1e-5, 1e-1);
    double w0 = src.uniform(0.5 * a, 1.3 * b);
    if (std::abs(w0 - a) < 1e-3 || std::abs(w0 - b) < 1e-3) w0 += 2e-3;
    NoiseModel m({NoiseComponent::flat_thermal(g, kInf)}, a, b);
    const double l1 = std::log((w0 + b) / (w0 + a)), l2 = std::log(std::abs((w0 - a) / (w0 - b)));
    const double rs = g / (2 * std::numbers::pi) * (l1 + l2), ra = g / (2 * std::numbers::pi) * (l1 - l2);
    INFO("case " << i << " a=" << a << " b=" << b << " w0=" << w0);
    CHECK(std::abs(principal_value_shift(m, w0, ShiftPart::Symmetric) - rs) < 1e-8 * std::max(1.0, std::abs(rs)));
    CHECK(std::abs(principal_value_shift(m, w0, ShiftPart::Antisymmetric) - ra) < 1e-8 * std::max(1.0, std::abs(ra)));
  }
  NoiseModel m({NoiseComponent::flat_thermal(1e-3, kInf)}, 0.01, 50.0);
  CHECK_THROWS_AS(principal_value_shift(m, 50.0, ShiftPart::Symmetric), NumericsError);
}

TEST_CASE("steady state equals the null vector of the rate generator") {
  gen::Source src(31);
  for (int i = 0; i < 50; ++i) {
    const auto c = gen::random_case(src);
    INFO("case " << i << ": " << c.label);
    const auto rho = ness(c.model, c.noise);
    const auto gen = rate_matrix(c.model.with_n_max(rho.n_max()), c.noise);
    const auto ref = null_vector(gen.dense());
    for (int n = 0; n <= rho.n_max(); ++n) CHECK(std::abs(rho[n] - ref(n)) < 1e-12 + 1e-9 * ref(n));
    CHECK(gen.apply(rho.vector()).lpNorm<Eigen::Infinity>() < 1e-15);
  }
}

TEST_CASE("single thermal bath gives the Gibbs state") {
  for (double chi : {0.0, 0.5, 3.0})
    for (double omega : {1.0, 5.0}) {
      NoiseModel m({NoiseComponent::flat_thermal(1e-3, 10.0)}, 0.01, 50.0);
      const auto model = OscillatorModel::kerr(omega, chi, 6);
      const auto rho = ness(model, m);
      for (int n = 0; n <= rho.n_max(); ++n)
        CHECK(std::abs(rho.log_weights[static_cast<std::size_t>(n)] + 10.0 * (model.energy(n) - model.energy(0))) <
              1e-10);
    }
}

TEST_CASE("detailed balance and current conservation") {
  gen::Source src(41);
  for (int i = 0; i < 50; ++i) {
    const auto c = gen::random_case(src);
    INFO("case " << i << ": " << c.label);
    const auto rho = ness(c.model, c.noise);
    const auto g = rate_matrix(c.model.with_n_max(rho.n_max()), c.noise);
    for (int n = 1; n <= rho.n_max(); ++n) {
      const double up = rho[n - 1] * g.raise[static_cast<std::size_t>(n - 1)];
      const double down = rho[n] * g.lower[static_cast<std::size_t>(n)];
      CHECK(std::abs(up - down) <= 1e-12 * std::max(up, down));
    }
    const auto cur = currents(c.model.with_n_max(rho.n_max()), c.noise, rho);
    CHECK(std::abs(cur.imbalance()) < 1e-10 * cur.classical_source);
    CHECK(gen::rel(cur.detector, cur.detector_closed_form) < 1e-12);
  }
}

TEST_CASE("propagator agrees with the matrix exponential") {
  gen::Source src(51);
  for (int i = 0; i < 20; ++i) {
    const auto c = gen::random_case(src);
    INFO("case " << i << ": " << c.label);
    const auto g = rate_matrix(c.model, c.noise);
    const PopulationPropagator p(g);
    Eigen::VectorXd rho0 = Eigen::VectorXd::Zero(g.n_max() + 1);
    rho0(0) = 1.0;
    const Eigen::MatrixXd dense = g.dense();
    for (double t : {1.0, 100.0, 3000.0}) {
      const Eigen::VectorXd ref = (dense * t).exp() * rho0;
      CHECK((p.apply(rho0, t) - ref).lpNorm<Eigen::Infinity>() < 1e-10);
    }
  }
}

TEST_CASE("classical-only and empty noise have no steady state") {
  NoiseModel classical({NoiseComponent::classical_one_over_f(1e-3)}, 0.01, 50.0);
  const auto model = OscillatorModel::kerr(5.0, 3.0, 6);
  try {
    ness(model, classical);
    FAIL("expected PhysicsError");
  } catch (const PhysicsError& e) {
    CHECK(std::string(e.what()).find("non-normalizable") != std::string::npos);
  }
  CHECK_THROWS_AS(choose_truncation(model, classical, 1e-12), PhysicsError);
  CHECK_THROWS_AS(ness(model, NoiseModel({}, 0.01, 50.0)), PhysicsError);
}

TEST_CASE("ladder leaving the noise support is truncated with a warning") {
  NoiseModel m({NoiseComponent::classical_one_over_f(1e-3), NoiseComponent::flat_thermal(1e-3, 1.0)}, 0.01, 20.0);
  const auto rho = ness(OscillatorModel::kerr(5.0, 3.0, 8), m);
  // Omega_3 = 23 lies above the cutoff, so level 3 is the last reachable one.
  CHECK(rho.n_max() == 3);
  CHECK(rho.requested_n_max == 8);
  CHECK_FALSE(rho.warnings.empty());
}

TEST_CASE("truncation rule") {
  NoiseModel m({NoiseComponent::classical_one_over_f(1e-3), NoiseComponent::flat_thermal(1e-3, 10.0)}, 0.01, 50.0);
  const auto model = OscillatorModel::kerr(5.0, 0.5, 1);
  const int n = choose_truncation(model, m, 1e-12);
  const auto rho = ness(model.with_n_max(n), m);
  CHECK(rho.tail_ratio < 1e-12);
  const auto shorter = ness(model.with_n_max(n - 1), m);
  CHECK(shorter.tail_ratio >= 1e-12);
}
