#include "doctest.h"

#include <complex>

#include "correlations.hpp"
#include "errors.hpp"
#include "generators.hpp"
#include "oracle.hpp"
#include "oracle_check.hpp"

using namespace kerrnoise;

TEST_CASE("vectorization round trip and Kronecker identity") {
  gen::Source src(71);
  for (int dim : {1, 3, 6}) {
    Eigen::MatrixXcd x(dim, dim), a(dim, dim), b(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        x(i, j) = {src.uniform(-1, 1), src.uniform(-1, 1)};
        a(i, j) = {src.uniform(-1, 1), src.uniform(-1, 1)};
        b(i, j) = {src.uniform(-1, 1), src.uniform(-1, 1)};
      }
    CHECK((oracle::unvectorize(oracle::vectorize(x), dim) - x).norm() == 0.0);
    CHECK(oracle::vectorize(x)(dim > 1 ? 1 : 0) == x(0, dim > 1 ? 1 : 0));
    // vec(A X B) = (A kron B^T) vec(X), built entry by entry.
    Eigen::MatrixXcd k(dim * dim, dim * dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int p = 0; p < dim; ++p)
          for (int q = 0; q < dim; ++q) k(i * dim + p, j * dim + q) = a(i, j) * b(q, p);
    CHECK((k * oracle::vectorize(x) - oracle::vectorize(a * x * b)).norm() < 1e-12);
  }
}

TEST_CASE("ladder operators") {
  const int dim = 5;
  const auto a = oracle::ladder_operator({oracle::Ladder::Annihilate}, dim);
  const auto ad = oracle::ladder_operator({oracle::Ladder::Create}, dim);
  const auto n = oracle::ladder_operator({oracle::Ladder::Number}, dim);
  CHECK((ad * a - n).norm() < 1e-14);
  const Eigen::MatrixXcd comm = a * ad - ad * a;
  for (int k = 0; k + 1 < dim; ++k) CHECK(std::abs(comm(k, k) - 1.0) < 1e-14);
  CHECK((oracle::ladder_operator({oracle::Ladder::Create, oracle::Ladder::Annihilate}, dim) - n).norm() < 1e-14);
  CHECK((oracle::ladder_operator({}, dim) - Eigen::MatrixXcd::Identity(dim, dim)).norm() == 0.0);
}

TEST_CASE("full generator preserves trace and reproduces the reduced steady state") {
  gen::Source src(81);
  for (int i = 0; i < 10; ++i) {
    const auto c = gen::random_case(src, 6);
    INFO("case " << i << ": " << c.label);
    const auto rho = ness(c.model, c.noise);
    const auto l = oracle::build_liouvillian(c.model, c.noise, rho.n_max());
    const int dim = l.dim();
    for (int col = 0; col < dim * dim; ++col) {
      std::complex<double> tr = 0.0;
      for (int k = 0; k < dim; ++k) tr += l.matrix(k * dim + k, col);
      CHECK(std::abs(tr) < 1e-14);
    }
    const auto ss = oracle::steady_state(l);
    for (int n = 0; n < dim; ++n) CHECK(std::abs(ss(n, n) - rho[n]) < 1e-10);
    CHECK((ss - Eigen::MatrixXcd(ss.diagonal().asDiagonal())).norm() < 1e-10);
  }
}

TEST_CASE("oracle check passes on the preset") {
  NoiseModel noise({NoiseComponent::classical_one_over_f(1e-3), NoiseComponent::super_ohmic_thermal(1e-6, 3.0, 10.0),
                    NoiseComponent::flat_thermal(1e-3, 10.0)},
                   0.01, 50.0);
  const auto model = OscillatorModel::kerr(5.0, 3.0, 6);
  const auto report = run_oracle_check(model, noise, 6);
  for (const auto& c : report.checks) {
    INFO(c.name << " = " << c.value);
    CHECK(c.passed);
  }
  CHECK(report.to_json().find("\"all_passed\": true") != std::string::npos);
  CHECK_THROWS_AS(run_oracle_check(model, noise, 40), ConfigError);
}

TEST_CASE("oracle check with a transition just beyond the cutoff") {
  // Omega_1 = 4 + 2 chi sits 2e-6 above omega_max: the ladder is cut after
  // level 1 and the principal values see a near-singular kernel.
  NoiseModel noise({NoiseComponent::classical_one_over_f(1e-3), NoiseComponent::flat_thermal(1e-3, 2.0)}, 0.01, 10.0);
  const auto model = OscillatorModel::kerr(4.0, 3.0 + 1e-6, 4);
  const auto report = run_oracle_check(model, noise, 4);
  for (const auto& c : report.checks) {
    INFO(c.name << " = " << c.value);
    CHECK(c.passed);
  }
}
