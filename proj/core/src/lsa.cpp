#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/QR>

#include "planpeer/analytics.hpp"
#include "planpeer/error.hpp"

namespace planpeer {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kJacobiTol = 1e-14;
constexpr int kMaxSweeps = 80;

// Hestenes one-sided Jacobi: rotates the columns of `w` until they are
// mutually orthogonal, accumulating the rotations in `rot`.
void orthogonalize_columns(MatrixXd& w, MatrixXd& rot) {
  const Index n = w.cols();
  rot = MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double alpha = w.col(p).squaredNorm();
        const double beta = w.col(q).squaredNorm();
        const double gamma = w.col(p).dot(w.col(q));
        if (alpha == 0.0 || beta == 0.0 || std::abs(gamma) <= kJacobiTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        VectorXd wp = w.col(p);
        w.col(p) = c * wp - s * w.col(q);
        w.col(q) = s * wp + c * w.col(q);
        VectorXd rp = rot.col(p);
        rot.col(p) = c * rp - s * rot.col(q);
        rot.col(q) = s * rp + c * rot.col(q);
      }
    }
    if (!rotated) return;
  }
  double worst = 0.0;
  for (Index p = 0; p + 1 < n; ++p)
    for (Index q = p + 1; q < n; ++q) {
      const double denom = w.col(p).norm() * w.col(q).norm();
      if (denom > 0) worst = std::max(worst, std::abs(w.col(p).dot(w.col(q))) / denom);
    }
  throw ConvergenceError("Jacobi SVD did not converge", worst);
}

struct Factors {
  VectorXd sigma;      // descending
  MatrixXd loadings;   // right singular vectors, cols x k
};

// Replaces columns [from, k) of `basis` with unit vectors orthogonal to
// every column before them.
void complete_basis(MatrixXd& basis, Index from) {
  const Index dim = basis.rows();
  Index candidate = 0;
  for (Index j = from; j < basis.cols(); ++j) {
    while (candidate < dim) {
      VectorXd v = VectorXd::Unit(dim, candidate++);
      for (int pass = 0; pass < 2; ++pass)
        for (Index i = 0; i < j; ++i) v -= basis.col(i).dot(v) * basis.col(i);
      const double norm = v.norm();
      if (norm > 1e-8) {
        basis.col(j) = v / norm;
        break;
      }
    }
  }
}

// Exact SVD of a dense matrix; returns all min(rows, cols) right factors.
Factors exact_factors(const MatrixXd& a) {
  const Index rows = a.rows(), cols = a.cols();
  MatrixXd w, rot;
  Factors f;
  std::vector<Index> order;
  if (rows >= cols) {
    // a * rot = U Sigma, rot = V
    w = a;
    orthogonalize_columns(w, rot);
    VectorXd norms = w.colwise().norm();
    order.resize(static_cast<std::size_t>(cols));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return norms[x] > norms[y]; });
    f.sigma.resize(cols);
    f.loadings.resize(cols, cols);
    for (Index j = 0; j < cols; ++j) {
      f.sigma[j] = norms[order[static_cast<std::size_t>(j)]];
      f.loadings.col(j) = rot.col(order[static_cast<std::size_t>(j)]);
    }
    return f;
  }
  // a^T * rot = V Sigma
  w = a.transpose();
  orthogonalize_columns(w, rot);
  VectorXd norms = w.colwise().norm();
  order.resize(static_cast<std::size_t>(rows));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return norms[x] > norms[y]; });
  f.sigma.resize(rows);
  f.loadings = MatrixXd::Zero(cols, rows);
  const double floor = (norms.size() ? norms.maxCoeff() : 0.0) * 1e-12;
  Index good = rows;
  for (Index j = 0; j < rows; ++j) {
    const double s = norms[order[static_cast<std::size_t>(j)]];
    f.sigma[j] = s;
    if (s <= floor || s == 0.0) {
      good = std::min(good, j);
      continue;
    }
    f.loadings.col(j) = w.col(order[static_cast<std::size_t>(j)]) / s;
  }
  if (good < rows) complete_basis(f.loadings, good);
  return f;
}

MatrixXd orthonormal_basis(const MatrixXd& y) {
  Eigen::HouseholderQR<MatrixXd> qr(y);
  return qr.householderQ() * MatrixXd::Identity(y.rows(), y.cols());
}

template <typename Matrix>
LsaModel finish(const Matrix& a, Factors f, std::size_t r) {
  LsaModel m;
  const auto k = static_cast<Index>(r);
  m.singular_values = f.sigma.head(k);
  m.term_loadings = f.loadings.leftCols(k);
  for (Index j = 0; j < k; ++j) {
    Index arg = 0;
    m.term_loadings.col(j).cwiseAbs().maxCoeff(&arg);
    if (m.term_loadings(arg, j) < 0) m.term_loadings.col(j) *= -1.0;
  }
  m.doc_scores = a * m.term_loadings;
  return m;
}

template <typename Matrix>
LsaModel randomized(const Matrix& a, std::size_t r, const SvdOptions& opts) {
  const Index rows = a.rows(), cols = a.cols();
  const Index width = std::min<Index>(static_cast<Index>(r + opts.oversample), std::min(rows, cols));

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  MatrixXd omega(cols, width);
  for (Index j = 0; j < width; ++j)
    for (Index i = 0; i < cols; ++i) omega(i, j) = gauss(rng);

  // Subspace iteration until the leading Ritz values stop moving. Vector
  // residuals stall on flat spectra where the leading subspace is barely
  // separated from the tail, so they make a poor stopping rule.
  MatrixXd q = orthonormal_basis(a * omega);
  const auto k = static_cast<Index>(r);
  VectorXd previous = VectorXd::Constant(k, -1.0);
  double residual = 0.0;
  for (std::size_t it = 0; it <= opts.max_iterations; ++it) {
    MatrixXd b = q.transpose() * a;  // width x cols
    Factors f = exact_factors(b);
    const double top = f.sigma[0];
    residual = top > 0.0 ? (f.sigma.head(k) - previous).cwiseAbs().maxCoeff() / top : 0.0;
    if (residual <= opts.tolerance) return finish(a, std::move(f), r);
    previous = f.sigma.head(k);
    MatrixXd z = orthonormal_basis(a.transpose() * q);
    q = orthonormal_basis(a * z);
  }
  throw ConvergenceError("truncated SVD exceeded " + std::to_string(opts.max_iterations) + " iterations", residual);
}

void check_rank(Index rows, Index cols, std::size_t r) {
  if (r == 0 || static_cast<Index>(r) > std::min(rows, cols))
    throw ConfigError("SVD rank " + std::to_string(r) + " outside [1, " + std::to_string(std::min(rows, cols)) + "]");
}

}  // namespace

LsaModel truncated_svd(const MatrixXd& m, std::size_t r, const SvdOptions& opts) {
  check_rank(m.rows(), m.cols(), r);
  if (static_cast<std::size_t>(std::min(m.rows(), m.cols())) <= opts.exact_limit)
    return finish(m, exact_factors(m), r);
  return randomized(m, r, opts);
}

LsaModel truncated_svd(const SparseRowMatrix& m, std::size_t r, const SvdOptions& opts) {
  check_rank(m.rows(), m.cols(), r);
  if (static_cast<std::size_t>(std::min(m.rows(), m.cols())) <= opts.exact_limit)
    return finish(m, exact_factors(MatrixXd(m)), r);
  return randomized(m, r, opts);
}

}  // namespace planpeer
