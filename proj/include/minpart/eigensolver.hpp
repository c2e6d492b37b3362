#pragma once

// Lowest eigenpairs of a sparse symmetric positive definite operator by block
// shift-invert subspace iteration with Rayleigh-Ritz, and exact eigenvalue
// counting from the inertia of a sparse LDL^T factorisation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "minpart/errors.hpp"
#include "minpart/magnetic_operator.hpp"

namespace minpart {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Eigenvectors are scaled so that sum_i u_i^2 h^2 = 1 and the entry of
/// largest magnitude (first on ties) is positive. Inside a degenerate cluster
/// the basis is whatever the seeded iteration lands on.
struct Spectrum {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd eigenvectors;
  std::vector<double> residuals;
  int iterations = 0;
  double operator_norm = 0.0;
  double h = 1.0;

  std::size_t size() const { return eigenvalues.size(); }
  Eigen::VectorXd vector(std::size_t i) const { return eigenvectors.col(static_cast<Eigen::Index>(i)); }
};

struct EigenOptions {
  double tol = kDefaultTol;
  std::uint64_t seed = kDefaultSeed;
  int max_iterations = 5000;
  /// Operators at or below this dimension are solved densely.
  Eigen::Index dense_threshold = 400;
};

/// Max absolute row sum; an upper bound for the spectral norm.
inline double operator_norm_bound(const Eigen::SparseMatrix<double>& a) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
  for (Eigen::Index c = 0; c < a.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

namespace detail {

inline void finalize_vectors(Spectrum& s, double h) {
  for (Eigen::Index j = 0; j < s.eigenvectors.cols(); ++j) {
    auto col = s.eigenvectors.col(j);
    col.normalize();
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      // Strict comparison with a tiny margin keeps the choice stable against
      // last-bit noise between runs on symmetric data.
      if (std::abs(col[i]) > best * (1.0 + 1e-9)) {
        best = std::abs(col[i]);
        imax = i;
      }
    }
    if (col[imax] < 0) col = -col;
    col /= h;
  }
  s.h = h;
}

}  // namespace detail

inline Spectrum smallest_eigenpairs(const SparseOperator& op, std::size_t m, const EigenOptions& opt = {}) {
  const auto& A = op.matrix;
  const Eigen::Index n = A.rows();
  if (m < 1 || static_cast<Eigen::Index>(m) > n)
    throw Error(ErrorCode::DimensionTooSmall, "requested " + std::to_string(m) + " eigenpairs of a " + std::to_string(n) + "-dimensional operator");
  if (!(opt.tol > 0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");

  const auto mi = static_cast<Eigen::Index>(m);
  Spectrum s;
  s.operator_norm = operator_norm_bound(A);
  const double h = op.h > 0 ? op.h : 1.0;

  if (n <= opt.dense_threshold) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(A)};
    s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + mi);
    s.eigenvectors = es.eigenvectors().leftCols(mi);
    for (Eigen::Index j = 0; j < mi; ++j)
      s.residuals.push_back((A * s.eigenvectors.col(j) - s.eigenvalues[static_cast<std::size_t>(j)] * s.eigenvectors.col(j)).norm());
    detail::finalize_vectors(s, h);
    return s;
  }

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> chol(A);
  if (chol.info() != Eigen::Success)
    throw Error(ErrorCode::FactorizationBreakdown, "operator is not positive definite");

  const Eigen::Index p = std::min(n, std::max<Eigen::Index>(mi + 8, 2 * mi));
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = normal(rng);

  const double target = opt.tol * s.operator_norm;
  double worst = 0.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Eigen::MatrixXd Y = chol.solve(X);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    Eigen::MatrixXd AQ = A * Q;
    Eigen::MatrixXd H = Q.transpose() * AQ;
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(H);
    X = Q * rr.eigenvectors();
    Eigen::MatrixXd AX = AQ * rr.eigenvectors();
    worst = 0.0;
    std::vector<double> res(static_cast<std::size_t>(mi));
    for (Eigen::Index j = 0; j < mi; ++j) {
      res[static_cast<std::size_t>(j)] = (AX.col(j) - rr.eigenvalues()[j] * X.col(j)).norm();
      worst = std::max(worst, res[static_cast<std::size_t>(j)]);
    }
    if (worst <= target) {
      s.iterations = it;
      s.eigenvalues.assign(rr.eigenvalues().data(), rr.eigenvalues().data() + mi);
      s.eigenvectors = X.leftCols(mi);
      s.residuals = std::move(res);
      detail::finalize_vectors(s, h);
      return s;
    }
  }
  throw Error(ErrorCode::NoConvergence, "after " + std::to_string(opt.max_iterations) + " iterations, best residual " + std::to_string(worst));
}

inline Spectrum smallest_eigenpairs(const SparseOperator& op, std::size_t m, double tol, std::uint64_t seed) {
  EigenOptions opt;
  opt.tol = tol;
  opt.seed = seed;
  return smallest_eigenpairs(op, m, opt);
}

namespace detail {

/// Negative pivots of LDL^T of (A - lambda I); throws on a pivot that is
/// numerically zero.
inline std::size_t inertia_below(const Eigen::SparseMatrix<double>& a, double lambda, double norm) {
  Eigen::SparseMatrix<double> shifted = a;
  for (Eigen::Index i = 0; i < shifted.rows(); ++i) shifted.coeffRef(i, i) -= lambda;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(shifted);
  if (ldlt.info() != Eigen::Success)
    throw Error(ErrorCode::FactorizationBreakdown, "zero pivot at lambda=" + std::to_string(lambda));
  const auto& d = ldlt.vectorD();
  const double tiny = 64.0 * std::numeric_limits<double>::epsilon() * std::max(norm, std::abs(lambda));
  std::size_t negative = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(std::abs(d[i]) > tiny))
      throw Error(ErrorCode::FactorizationBreakdown, "near-zero pivot at lambda=" + std::to_string(lambda));
    if (d[i] < 0) ++negative;
  }
  return negative;
}

}  // namespace detail

/// Number of eigenvalues strictly below lambda (Sylvester inertia). When
/// lambda sits on an eigenvalue the count is taken slightly below it, backing
/// off from lambda (1 - 1e-10) until the factorization is stable.
inline std::size_t count_below(const SparseOperator& op, double lambda) {
  if (!std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda must be finite");
  if (lambda <= 0.0) return 0;
  const double norm = operator_norm_bound(op.matrix);
  try {
    return detail::inertia_below(op.matrix, lambda, norm);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::FactorizationBreakdown) throw;
  }
  for (double rel : {1e-10, 1e-8, 1e-6}) {
    try {
      return detail::inertia_below(op.matrix, lambda * (1.0 - rel), norm);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::FactorizationBreakdown) throw;
    }
  }
  return detail::inertia_below(op.matrix, lambda * (1.0 - 1e-4), norm);
}

/// Two-grid Richardson extrapolation for an O(h^2) quantity computed at
/// spacings h and h/2.
inline double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

inline std::vector<double> richardson(const std::vector<double>& coarse, const std::vector<double>& fine) {
  if (coarse.size() != fine.size()) throw Error(ErrorCode::InvalidArgument, "spectra of different lengths");
  std::vector<double> out(coarse.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = richardson(coarse[i], fine[i]);
  return out;
}

}  // namespace minpart
