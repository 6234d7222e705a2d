#include "oracle_check.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "correlations.hpp"
#include "errors.hpp"
#include "oracle.hpp"
#include "redfield.hpp"

namespace kerrnoise {

namespace {

void add(OracleReport& report, std::string name, double value, double tolerance) {
  report.checks.push_back({std::move(name), value, tolerance, value <= tolerance});
}

std::vector<double> uniform_tau(double end, int count) {
  std::vector<double> tau;
  for (int k = 0; k < count; ++k) tau.push_back(end * k / (count - 1));
  return tau;
}

// |a - b| / max(|b|, 1e-3 |b_0|): relative error that stays defined where a
// decaying reference passes close to zero.
double max_relative(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
  double worst = 0.0;
  const double floor = 1e-3 * std::abs(b.front());
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), floor));
  return worst;
}

}  // namespace

bool OracleReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
}

std::string OracleReport::to_json() const {
  nlohmann::ordered_json j;
  j["n_max"] = n_max;
  j["all_passed"] = all_passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  j["warnings"] = warnings;
  return j.dump(2);
}

OracleReport run_oracle_check(const OscillatorModel& model, const NoiseModel& noise, int n_max) {
  if (n_max < 1 || n_max > oracle::kMaxLevels)
    throw ConfigError("oracle-check n_max must lie in [1, " + std::to_string(oracle::kMaxLevels) + "]");
  const auto rho = ness(model.with_n_max(n_max), noise);
  OracleReport report;
  report.warnings = rho.warnings;
  report.n_max = rho.n_max();
  const auto ladder = model.with_n_max(report.n_max);
  const int dim = report.n_max + 1;
  const auto liou = oracle::build_liouvillian(ladder, noise, report.n_max);
  const auto& l = liou.matrix;

  double trace_leak = 0.0;
  for (Eigen::Index col = 0; col < l.cols(); ++col) {
    std::complex<double> s = 0.0;
    for (int n = 0; n < dim; ++n) s += l(n * dim + n, col);
    trace_leak = std::max(trace_leak, std::abs(s));
  }
  add(report, "trace_preservation", trace_leak, 1e-12);

  const auto generator = rate_matrix(ladder, noise);
  const Eigen::MatrixXd dense = generator.dense();
  double sector = 0.0;
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) sector = std::max(sector, std::abs(l(n * dim + n, m * dim + m) - dense(n, m)));
  add(report, "rate_matrix_diagonal_sector", sector, 1e-12);

  const Eigen::MatrixXcd steady = oracle::steady_state(liou);
  double pop = 0.0;
  double coh = 0.0;
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) {
      if (n == m) pop = std::max(pop, std::abs(steady(n, n) - rho[n]));
      else coh = std::max(coh, std::abs(steady(n, m)));
    }
  add(report, "ness_populations", pop, 1e-8);
  add(report, "ness_coherences", coh, 1e-8);

  const auto spectrum_l = oracle::eigenvalues(liou);
  const double zeros = static_cast<double>(
      std::count_if(spectrum_l.begin(), spectrum_l.end(), [](auto z) { return std::abs(z) < 1e-10; }));
  add(report, "null_space_excess", std::abs(zeros - 1.0), 0.0);

  const PopulationPropagator propagator(generator);
  const double gap = propagator.spectral_gap() > 0.0 ? propagator.spectral_gap() : 1.0;

  Eigen::MatrixXcd diag0 = Eigen::MatrixXcd::Zero(dim, dim);
  diag0(0, 0) = 1.0;
  const Eigen::MatrixXcd diag_t = oracle::evolve(liou, diag0, 1.0 / gap);
  double leak = 0.0;
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m)
      if (n != m) leak = std::max(leak, std::abs(diag_t(n, m)));
  add(report, "coherence_decoupling", leak, 1e-12);

  Eigen::MatrixXcd herm = steady;
  herm(0, 1) += std::complex<double>(0.1, 0.05);
  herm(1, 0) += std::complex<double>(0.1, -0.05);
  const Eigen::MatrixXcd herm_t = oracle::evolve(liou, herm, 1.0 / gap);
  add(report, "hermiticity_preservation", (herm_t - herm_t.adjoint()).cwiseAbs().maxCoeff(), 1e-10);

  using oracle::Ladder;
  const auto tau2 = uniform_tau(3.0 / gap, 20);
  const auto reduced2 = g2_tau(ladder, noise, rho, tau2);
  auto full2 = oracle::regression_correlator(liou, steady, {Ladder::Annihilate}, {Ladder::Create},
                                             {Ladder::Number}, tau2);
  const double mean = rho.mean();
  for (auto& v : full2.values) v /= mean * mean;
  add(report, "g2_tau", max_relative(reduced2.values, full2.values), 1e-8);

  const auto sys = build_coherence_system(ladder, noise);
  const SpectrumEvaluator eigen_path(sys, sys.initial(rho));
  SpectrumOptions forced;
  forced.force_resolvent = true;
  const SpectrumEvaluator resolvent_path(sys, sys.initial(rho), forced);
  double slowest = std::numeric_limits<double>::infinity();
  for (auto lam : eigen_path.eigenvalues())
    if (lam.real() > 0.0) slowest = std::min(slowest, lam.real());
  if (!std::isfinite(slowest)) slowest = gap;
  const auto tau1 = uniform_tau(2.0 / slowest, 20);
  const auto reduced1 = g1_tau(ladder, noise, rho, tau1);
  const auto full1 = oracle::regression_correlator(liou, steady, {}, {Ladder::Create}, {Ladder::Annihilate}, tau1);
  add(report, "g1_tau", max_relative(reduced1.values, full1.values), 1e-6);
  for (const auto& w : {full1.warnings, full2.warnings}) report.warnings.insert(report.warnings.end(), w.begin(), w.end());

  std::vector<double> probe;
  for (auto lam : eigen_path.eigenvalues()) {
    for (double k : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
      const double w = lam.imag() + k * std::abs(lam.real());
      if (w > 0.0) probe.push_back(w);
    }
  }
  std::vector<double> reference;
  for (double w : probe) reference.push_back(oracle::spectrum(liou, steady, w));
  const double scale = std::max(1e-300, *std::max_element(reference.begin(), reference.end(),
                                                          [](double a, double b) { return std::abs(a) < std::abs(b); }));
  double err_eigen = 0.0;
  double err_resolvent = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    err_eigen = std::max(err_eigen, std::abs(eigen_path(probe[i]) - reference[i]) / std::abs(scale));
    err_resolvent = std::max(err_resolvent, std::abs(resolvent_path(probe[i]) - reference[i]) / std::abs(scale));
  }
  if (eigen_path.method() == SpectrumMethod::Eigenmodes) add(report, "spectrum_eigenmodes", err_eigen, 1e-6);
  else report.warnings.push_back("coherence matrix ill-conditioned; eigenmode spectrum skipped");
  add(report, "spectrum_resolvent", err_resolvent, 1e-6);
  return report;
}

}  // namespace kerrnoise
