#pragma once

// Partial-correlation networks through three routes: the precision-matrix
// formula rho_ij = -sigma^{ij} / sqrt(sigma^{ii} sigma^{jj}), correlations of
// node-wise least-squares residuals, and L1-penalized node-wise regressions
// for the underdetermined n << p regime.
//
// Note the sign convention: regressing x_j on all other nodes yields
// residuals with corr(r_i, r_j) = +sigma^{ij} / sqrt(sigma^{ii} sigma^{jj}),
// the negative of the partial correlation. The residual route flips that
// sign so both routes return the same matrix.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sparsenet/data_matrix.hpp"
#include "sparsenet/errors.hpp"
#include "sparsenet/parallel.hpp"
#include "sparsenet/soft_threshold.hpp"
#include "sparsenet/symmetric_matrix.hpp"

namespace sparsenet {

enum class PartialMethod { precision, residual, sparse };

template <class Scalar>
struct PartialCorrelationMatrixT {
  Mat<Scalar> rho;  // symmetric, unit diagonal
  PartialMethod method = PartialMethod::precision;
  std::optional<Scalar> lambda;

  Index dim() const { return rho.rows(); }
};

using PartialCorrelationMatrix = PartialCorrelationMatrixT<double>;

template <class Scalar>
PartialCorrelationMatrixT<Scalar> partial_from_precision(
    const SymmetricMatrixT<Scalar>& precision) {
  if (!precision.symmetric_kind())
    throw ValidationError("partial_from_precision expects a symmetric matrix kind");
  const Index p = precision.dim();
  if ((precision.entries.diagonal().array() <= Scalar(0)).any())
    throw NonPositiveDiagonalError("partial_from_precision: diagonal must be positive");
  PartialCorrelationMatrixT<Scalar> out;
  out.method = PartialMethod::precision;
  out.rho = Mat<Scalar>::Identity(p, p);
  const Vec<Scalar> inv_sqrt = precision.entries.diagonal().cwiseSqrt().cwiseInverse();
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < j; ++i) {
      const Scalar r = -precision.entries(i, j) * inv_sqrt[i] * inv_sqrt[j];
      out.rho(i, j) = r;
      out.rho(j, i) = r;
    }
  return out;
}

template <class Scalar>
struct NodewiseRegressionT {
  Index node = 0;
  Vec<Scalar> coefficients;  // length p, entry `node` is 0
  Vec<Scalar> residual;      // length n
  Scalar lambda = 0;         // 0 for least squares
  bool rank_deficient = false;
  bool converged = true;
  Scalar kkt_residual = 0;
  Index passes = 0;
};

using NodewiseRegression = NodewiseRegressionT<double>;

namespace detail {

template <class Scalar>
Mat<Scalar> drop_column(const Mat<Scalar>& x, Index j) {
  Mat<Scalar> out(x.rows(), x.cols() - 1);
  if (j > 0) out.leftCols(j) = x.leftCols(j);
  if (j + 1 < x.cols()) out.rightCols(x.cols() - 1 - j) = x.rightCols(x.cols() - 1 - j);
  return out;
}

template <class Scalar>
Vec<Scalar> scatter_coefficients(const Vec<Scalar>& compact, Index j) {
  Vec<Scalar> full = Vec<Scalar>::Zero(compact.size() + 1);
  if (j > 0) full.head(j) = compact.head(j);
  if (j < compact.size()) full.tail(compact.size() - j) = compact.tail(compact.size() - j);
  return full;
}

}  // namespace detail

// Least squares of x_j on all other columns, via the normal equations with a
// rank-revealing pseudo-inverse fallback. Requires n > p unless force_pinv.
template <class Scalar>
NodewiseRegressionT<Scalar> nodewise_lse(const DataMatrixT<Scalar>& data, Index node,
                                         bool force_pinv = false) {
  if (data.normalization == Normalization::raw)
    throw NotNormalizedError("nodewise_lse requires centered data");
  if (node < 0 || node >= data.p()) throw ValidationError("nodewise_lse: node out of range");
  if (data.n() <= data.p() && !force_pinv)
    throw UnderdeterminedError("nodewise_lse: n <= p is underdetermined; use nodewise_lasso "
                               "or force_pinv");

  const Mat<Scalar> design = detail::drop_column(data.values, node);
  const Vec<Scalar> target = data.values.col(node);

  Mat<Scalar> gram = design.transpose() * design;
  Vec<Scalar> rhs = design.transpose() * target;
  Eigen::LDLT<Mat<Scalar>> ldlt(gram);
  Vec<Scalar> beta = ldlt.solve(rhs);

  NodewiseRegressionT<Scalar> out;
  out.node = node;
  out.lambda = 0;

  // The normal equations are always consistent, so deficiency shows up in
  // the pivots, not in the solve residual.
  const Scalar pivot_max = ldlt.vectorD().cwiseAbs().maxCoeff();
  const Scalar pivot_tol = static_cast<Scalar>(gram.rows()) *
                           std::numeric_limits<Scalar>::epsilon() * pivot_max;
  const bool deficient =
      ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= pivot_tol;
  if (deficient) {
    Eigen::CompleteOrthogonalDecomposition<Mat<Scalar>> cod(design);
    beta = cod.solve(target);
    out.rank_deficient = true;
  }

  out.coefficients = detail::scatter_coefficients(beta, node);
  out.residual = target - design * beta;
  return out;
}

struct NodewiseLassoOptions {
  double tol = 1e-8;        // KKT tolerance
  Index max_passes = 10000;
};

namespace detail {

template <class Scalar>
NodewiseRegressionT<Scalar> nodewise_lasso_impl(const DataMatrixT<Scalar>& data, Index node,
                                                Scalar lambda,
                                                const NodewiseLassoOptions& opts) {
  if (data.normalization != Normalization::centered_unit_norm)
    throw NotNormalizedError("nodewise_lasso requires centered unit-norm data");
  if (node < 0 || node >= data.p()) throw ValidationError("nodewise_lasso: node out of range");
  if (lambda <= Scalar(0)) throw ValidationError("nodewise_lasso: lambda must be > 0");

  const Mat<Scalar>& x = data.values;
  const Index p = x.cols();
  NodewiseRegressionT<Scalar> out;
  out.node = node;
  out.lambda = lambda;
  out.coefficients = Vec<Scalar>::Zero(p);
  Vec<Scalar> r = x.col(node);

  const Scalar change_tol = static_cast<Scalar>(opts.tol) * Scalar(1e-2);
  bool kkt_ok = false;
  for (Index pass = 1; pass <= opts.max_passes; ++pass) {
    Scalar max_change = 0;
    for (Index k = 0; k < p; ++k) {
      if (k == node) continue;
      const Scalar d = x.col(k).squaredNorm();
      const Scalar old = out.coefficients[k];
      const Scalar updated = soft_threshold_scalar(x.col(k).dot(r) + d * old, lambda) / d;
      if (updated != old) {
        r -= (updated - old) * x.col(k);
        out.coefficients[k] = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    out.passes = pass;
    // The KKT certificate can hold while coefficients still wander along a
    // flat optimal face (collinear columns), so check it periodically, not
    // only after the changes settle. The fresh residual also resets the
    // drift the incremental updates accumulate.
    const bool settled =
        max_change <= change_tol * (Scalar(1) + out.coefficients.cwiseAbs().maxCoeff());
    if (settled || pass % 32 == 0) {
      r = x.col(node);
      for (Index k = 0; k < p; ++k)
        if (k != node && out.coefficients[k] != Scalar(0))
          r -= out.coefficients[k] * x.col(k);
      Scalar worst = 0;
      for (Index k = 0; k < p; ++k) {
        if (k == node) continue;
        const Scalar g = x.col(k).dot(r);
        const Scalar v =
            out.coefficients[k] == Scalar(0)
                ? std::max(Scalar(0), std::abs(g) - lambda)
                : std::abs(g - lambda * (out.coefficients[k] > Scalar(0) ? Scalar(1)
                                                                          : Scalar(-1)));
        worst = std::max(worst, v);
      }
      out.kkt_residual = worst;
      if (worst <= static_cast<Scalar>(opts.tol)) {
        kkt_ok = true;
        break;
      }
    }
  }
  out.converged = kkt_ok;
  out.residual = r;
  return out;
}

}  // namespace detail

// L1-penalized regression of x_j on all other columns by cyclic coordinate
// descent. Throws NotConverged when the pass budget runs out.
template <class Scalar>
NodewiseRegressionT<Scalar> nodewise_lasso(const DataMatrixT<Scalar>& data, Index node,
                                           Scalar lambda,
                                           const NodewiseLassoOptions& opts = {}) {
  NodewiseRegressionT<Scalar> out = detail::nodewise_lasso_impl(data, node, lambda, opts);
  if (!out.converged)
    throw NotConvergedError("nodewise_lasso: node " + std::to_string(node) + " KKT residual " +
                            std::to_string(out.kkt_residual) + " after " +
                            std::to_string(out.passes) + " passes");
  return out;
}

// Residual-correlation route; exact match of partial_from_precision applied
// to the inverse sample covariance whenever that inverse exists.
template <class Scalar>
PartialCorrelationMatrixT<Scalar> partial_from_residuals(const DataMatrixT<Scalar>& data,
                                                         bool force_pinv = false) {
  const Index p = data.p();
  Mat<Scalar> residuals(data.n(), p);
  for (Index j = 0; j < p; ++j)
    residuals.col(j) = nodewise_lse(data, j, force_pinv).residual;

  PartialCorrelationMatrixT<Scalar> out;
  out.method = PartialMethod::residual;
  out.rho = Mat<Scalar>::Identity(p, p);
  const Vec<Scalar> norms = residuals.colwise().norm();
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < j; ++i) {
      if (norms[i] <= Scalar(0) || norms[j] <= Scalar(0))
        throw NonPositiveDiagonalError("partial_from_residuals: zero residual at node " +
                                       std::to_string(norms[i] <= Scalar(0) ? i : j));
      const Scalar r = -residuals.col(i).dot(residuals.col(j)) / (norms[i] * norms[j]);
      out.rho(i, j) = r;
      out.rho(j, i) = r;
    }
  return out;
}

enum class EdgeRule { both_nonzero, either_nonzero };  // AND / OR symmetrization

struct SparsePartialOptions {
  NodewiseLassoOptions lasso;
  EdgeRule rule = EdgeRule::both_nonzero;
  int threads = 0;
};

template <class Scalar>
struct SparsePartialNetworkT {
  PartialCorrelationMatrixT<Scalar> partial;
  Mat<Scalar> coefficients;         // coefficients(j, k) = beta_{jk}
  std::vector<Index> failed_nodes;  // nodes whose lasso did not converge
};

using SparsePartialNetwork = SparsePartialNetworkT<double>;

// Node-wise lasso over all nodes. Edge (i, j) requires both beta_ij and
// beta_ji nonzero under the AND rule (either one under OR); the weight is
// sign(beta_ij) * sqrt(|beta_ij beta_ji|), clamped to [-1, 1].
template <class Scalar>
SparsePartialNetworkT<Scalar> sparse_partial_network(const DataMatrixT<Scalar>& data,
                                                     Scalar lambda,
                                                     const SparsePartialOptions& opts = {}) {
  const Index p = data.p();
  SparsePartialNetworkT<Scalar> out;
  out.coefficients = Mat<Scalar>::Zero(p, p);
  std::vector<char> failed(static_cast<size_t>(p), 0);

  parallel_for(p, opts.threads, [&](Index j) {
    NodewiseRegressionT<Scalar> reg = detail::nodewise_lasso_impl(data, j, lambda, opts.lasso);
    if (!reg.converged) failed[static_cast<size_t>(j)] = 1;
    out.coefficients.row(j) = reg.coefficients.transpose();
  });
  for (Index j = 0; j < p; ++j)
    if (failed[static_cast<size_t>(j)]) out.failed_nodes.push_back(j);

  out.partial.method = PartialMethod::sparse;
  out.partial.lambda = lambda;
  out.partial.rho = Mat<Scalar>::Identity(p, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < j; ++i) {
      const Scalar a = out.coefficients(i, j);
      const Scalar b = out.coefficients(j, i);
      Scalar weight = 0;
      if (a != Scalar(0) && b != Scalar(0)) {
        weight = (a > Scalar(0) ? Scalar(1) : Scalar(-1)) * std::sqrt(std::abs(a * b));
      } else if (opts.rule == EdgeRule::either_nonzero && (a != Scalar(0) || b != Scalar(0))) {
        weight = a != Scalar(0) ? a : b;
      }
      weight = std::clamp(weight, Scalar(-1), Scalar(1));
      out.partial.rho(i, j) = weight;
      out.partial.rho(j, i) = weight;
    }
  return out;
}

}  // namespace sparsenet
