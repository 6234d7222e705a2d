#include "oracle.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "errors.hpp"
#include "redfield.hpp"

namespace kerrnoise::oracle {

namespace {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

Mat annihilation(int dim) {
  Mat a = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// superoperator of X -> A X B
Mat sandwich(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, Mat(b.transpose())); }

}  // namespace

Eigen::VectorXcd vectorize(const Mat& x) {
  Eigen::VectorXcd v(x.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) v[i * x.cols() + j] = x(i, j);
  return v;
}

Mat unvectorize(const Eigen::VectorXcd& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) throw ConfigError("vector length is not dim^2");
  Mat x(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) x(i, j) = v[i * dim + j];
  return x;
}

Liouvillian build_liouvillian(const OscillatorModel& model, const NoiseModel& noise, int n_max) {
  if (n_max < 1 || n_max > kMaxLevels) {
    std::ostringstream msg;
    msg << "oracle n_max = " << n_max << " outside the dense guard [1, " << kMaxLevels << "]";
    throw ConfigError(msg.str());
  }
  const auto ladder = model.with_n_max(n_max);
  const int dim = n_max + 1;
  const auto c = ladder_couplings(ladder, noise);

  Mat h = Mat::Zero(dim, dim);
  Mat g1 = Mat::Zero(dim, dim);
  Mat g2 = Mat::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) h(n, n) = ladder.energy(n);
  // index n_max is never reached through a or a a^dag on the truncated space
  for (int n = 0; n < n_max; ++n) {
    g1(n, n) = c.g1[n];
    g2(n, n) = c.g2[n];
  }
  const Mat a = annihilation(dim);
  const Mat ad = a.adjoint();
  const Mat id = Mat::Identity(dim, dim);
  const Mat g1a = g1 * a;
  const Mat g2a = g2 * a;
  const Mat g1d = g1.adjoint();
  const Mat g2d = g2.adjoint();

  Liouvillian l;
  l.n_max = n_max;
  l.matrix = cd(0.0, 1.0) * (sandwich(id, h) - sandwich(h, id));
  l.matrix -= sandwich(ad * g1a, id);       // a^dag G1 a X
  l.matrix += sandwich(g1a, ad);            // G1 a X a^dag
  l.matrix -= sandwich(id, g2a * ad);       // X G2 a a^dag
  l.matrix += sandwich(ad, g2a);            // a^dag X G2 a
  l.matrix -= sandwich(id, ad * g1d * a);   // X a^dag G1^dag a
  l.matrix += sandwich(a, ad * g1d);        // a X a^dag G1^dag
  l.matrix -= sandwich(a * ad * g2d, id);   // a a^dag G2^dag X
  l.matrix += sandwich(ad * g2d, a);        // a^dag G2^dag X a
  return l;
}

Mat steady_state(const Liouvillian& l) {
  const int dim = l.dim();
  const auto size = l.matrix.rows();
  Mat system(size + 1, size);
  system.topRows(size) = l.matrix;
  system.bottomRows(1).setZero();
  for (int n = 0; n < dim; ++n) system(size, n * dim + n) = 1.0;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(size + 1);
  rhs[size] = 1.0;
  const Eigen::VectorXcd x = system.colPivHouseholderQr().solve(rhs);
  return unvectorize(x, dim);
}

Mat evolve(const Liouvillian& l, const Mat& rho0, double t) {
  if (!(t >= 0.0)) throw ConfigError("oracle evolution time must be >= 0");
  const Mat step = (l.matrix * t).exp();
  return unvectorize(step * vectorize(rho0), l.dim());
}

Eigen::VectorXcd eigenvalues(const Liouvillian& l) {
  Eigen::ComplexEigenSolver<Mat> solver(l.matrix, false);
  return solver.eigenvalues();
}

Mat ladder_operator(const LadderWord& word, int dim) {
  const Mat a = annihilation(dim);
  Mat out = Mat::Identity(dim, dim);
  for (auto op : word) {
    switch (op) {
      case Ladder::Annihilate: out = out * a; break;
      case Ladder::Create: out = out * a.adjoint(); break;
      case Ladder::Number: out = out * (a.adjoint() * a); break;
    }
  }
  return out;
}

RegressionResult regression_correlator(const Liouvillian& l, const Mat& rho, const LadderWord& left,
                                       const LadderWord& right, const LadderWord& observe,
                                       const std::vector<double>& tau) {
  const int dim = l.dim();
  const Mat obs = ladder_operator(observe, dim);
  const Mat start = ladder_operator(left, dim) * rho * ladder_operator(right, dim);
  const double scale = start.norm();
  RegressionResult out;
  Eigen::VectorXcd state = vectorize(start);
  double previous = 0.0;
  for (double t : tau) {
    if (!(t >= previous)) throw ConfigError("oracle tau grid must be nondecreasing and >= 0");
    if (t > previous) state = (l.matrix * (t - previous)).exp() * state;
    previous = t;
    const Mat x = unvectorize(state, dim);
    out.values.push_back((obs * x).trace());
    const double band = std::sqrt(x.row(dim - 1).squaredNorm() + x.col(dim - 1).squaredNorm());
    if (scale > 0.0) out.leakage = std::max(out.leakage, band / scale);
  }
  if (out.leakage > 1e-8) {
    std::ostringstream msg;
    msg << "truncation leakage " << out.leakage << " on the n_max band";
    out.warnings.push_back(msg.str());
  }
  return out;
}

double spectrum(const Liouvillian& l, const Mat& rho, double omega) {
  const int dim = l.dim();
  const Mat a = annihilation(dim);
  Mat shifted = l.matrix;
  shifted.diagonal().array() += cd(0.0, omega);
  // Int_0^inf e^{(L + i w) tau} d tau = -(L + i w)^{-1}
  const Eigen::VectorXcd x = shifted.partialPivLu().solve(vectorize(rho * a.adjoint()));
  return (-(a * unvectorize(x, dim)).trace()).real();
}

}  // namespace kerrnoise::oracle
