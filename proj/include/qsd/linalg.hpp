#ifndef QSD_LINALG_HPP
#define QSD_LINALG_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsd/rng.hpp"

namespace qsd {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full spectrum of a symmetric matrix, eigenvalues ascending.
struct SymEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns
};

inline SymEigen dense_sym_eig(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw SolverError("dense symmetric eigensolve failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// One extremal eigenpair of a sparse symmetric matrix: power iteration for a
/// first estimate, then shifted inverse iteration (SparseLU) down to the
/// requested residual. `low` targets the smallest eigenvalue instead of the
/// largest. `deflate` columns are projected out at every step.
struct SparseEigenResult {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  int iterations = 0;
};

inline SparseEigenResult sparse_extremal_eigenpair(const Eigen::SparseMatrix<double>& a, bool low = false,
                                                   const std::vector<Eigen::VectorXd>& deflate = {},
                                                   double tol = 1e-13, int max_iter = 200000,
                                                   std::uint64_t seed = 20240901) {
  const int n = static_cast<int>(a.rows());
  SplitRng rng(seed, low ? 1 : 0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * rng.next_double();
  auto project = [&](Eigen::VectorXd& w) {
    for (auto& d : deflate) w -= d.dot(w) * d;
  };
  project(v);
  v.normalize();

  // spectral bound for the flip shift when the smallest eigenvalue is wanted
  double bound = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    double row = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) row += std::abs(it.value());
    bound = std::max(bound, row);
  }
  bound += 1.0;

  // Power iteration runs on bound*I + A (or bound*I - A for the low end) so
  // that the target is extremal in absolute value regardless of the sign of
  // the spectrum's far end.
  double lambda = 0.0;
  int it_count = 0;
  double res = 1.0;
  for (; it_count < max_iter; ++it_count) {
    Eigen::VectorXd w = a * v;
    lambda = v.dot(w);
    res = (w - lambda * v).norm();
    if (res < std::sqrt(tol) || it_count == max_iter - 1) break;
    w = low ? Eigen::VectorXd(bound * v - w) : Eigen::VectorXd(bound * v + w);
    project(w);
    double nw = w.norm();
    if (nw == 0.0) throw SolverError("power iteration collapsed to zero vector");
    v = w / nw;
  }

  // inverse iteration polish: a couple of solves against (A - sigma I)
  double sigma = lambda + (low ? -1.0 : 1.0) * std::max(1e-8, 10 * res);
  Eigen::SparseMatrix<double> shifted = a;
  for (int k = 0; k < n; ++k) shifted.coeffRef(k, k) -= sigma;
  shifted.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(shifted);
  if (lu.info() == Eigen::Success) {
    for (int polish = 0; polish < 8; ++polish) {
      Eigen::VectorXd w = lu.solve(v);
      project(w);
      double nw = w.norm();
      if (!(nw > 0.0) || !std::isfinite(nw)) break;
      v = w / nw;
      Eigen::VectorXd av = a * v;
      lambda = v.dot(av);
      res = (av - lambda * v).norm();
      ++it_count;
      if (res < tol) break;
    }
  }
  if (res > 1e-9) throw SolverError("sparse eigensolver did not converge (residual " + std::to_string(res) + ")");
  return {lambda, v, res, it_count};
}

/// Least-squares slope/intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw SolverError("fit_line needs >= 2 points");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw SolverError("degenerate abscissae in fit_line");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace qsd

#endif
