#pragma once

// Generic cyclic coordinate descent for 1/2 ||y - D b||^2 + lambda ||b||_1.
// This is the numeric baseline the closed-form estimators are checked
// against and timed against; it never looks at problem structure.

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <vector>

#include "sparsenet/errors.hpp"
#include "sparsenet/soft_threshold.hpp"
#include "sparsenet/types.hpp"

namespace sparsenet {

template <class Scalar>
struct LassoResult {
  Vec<Scalar> beta;
  Scalar kkt_residual = 0;
  Index passes = 0;
  bool converged = false;
};

// KKT residual: max over k of the subgradient violation
//   |d_k^T r| <= lambda + tol where b_k = 0,
//   d_k^T r = lambda * sign(b_k) +- tol otherwise.
template <class Scalar>
Scalar lasso_kkt_residual(const Eigen::Ref<const Mat<Scalar>>& design,
                          const Eigen::Ref<const Vec<Scalar>>& target,
                          const Eigen::Ref<const Vec<Scalar>>& beta, Scalar lambda) {
  const Vec<Scalar> r = target - design * beta;
  Scalar worst = 0;
  for (Index k = 0; k < design.cols(); ++k) {
    const Scalar g = design.col(k).dot(r);
    const Scalar v = beta[k] == Scalar(0)
                         ? std::max(Scalar(0), std::abs(g) - lambda)
                         : std::abs(g - lambda * (beta[k] > Scalar(0) ? Scalar(1) : Scalar(-1)));
    worst = std::max(worst, v);
  }
  return worst;
}

template <class Scalar>
LassoResult<Scalar> cyclic_lasso(const Eigen::Ref<const Mat<Scalar>>& design,
                                 const Eigen::Ref<const Vec<Scalar>>& target, Scalar lambda,
                                 Scalar tol, Index max_passes = 100000) {
  if (!design.allFinite() || !target.allFinite())
    throw NonFiniteError("cyclic_lasso: non-finite input");
  if (design.rows() != target.size())
    throw ShapeMismatchError("cyclic_lasso: design rows must match target length");
  if (lambda < Scalar(0)) throw ValidationError("cyclic_lasso: lambda must be >= 0");
  if (tol <= Scalar(0)) throw ValidationError("cyclic_lasso: tol must be > 0");

  const Index m = design.cols();
  LassoResult<Scalar> res;
  res.beta = Vec<Scalar>::Zero(m);
  Vec<Scalar> norms(m);
  for (Index k = 0; k < m; ++k) norms[k] = design.col(k).squaredNorm();

  Vec<Scalar> r = target;
  const Scalar change_tol = tol * Scalar(1e-2);
  for (Index pass = 1; pass <= max_passes; ++pass) {
    Scalar max_change = 0;
    for (Index k = 0; k < m; ++k) {
      if (norms[k] <= Scalar(0)) continue;  // zero column: coefficient stays 0
      const Scalar old = res.beta[k];
      const Scalar c = design.col(k).dot(r) + norms[k] * old;
      const Scalar updated = soft_threshold_scalar(c, lambda) / norms[k];
      if (updated != old) {
        r -= (updated - old) * design.col(k);
        res.beta[k] = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    res.passes = pass;
    // Optimality can arrive while coefficients still trade mass along a
    // flat face (collinear columns), so certify periodically as well as
    // after the changes settle; the certificate recomputes the residual.
    const bool settled =
        max_change <= change_tol * (Scalar(1) + res.beta.cwiseAbs().maxCoeff());
    if (settled || pass % 32 == 0) {
      res.kkt_residual = lasso_kkt_residual<Scalar>(design, target, res.beta, lambda);
      if (res.kkt_residual <= tol) {
        res.converged = true;
        return res;
      }
      r = target - design * res.beta;  // reset incremental drift
    }
  }
  res.kkt_residual = lasso_kkt_residual<Scalar>(design, target, res.beta, lambda);
  res.converged = res.kkt_residual <= tol;
  return res;
}

// Column-list surface. Throws NotConverged if the pass budget runs out.
template <class Scalar>
Vec<Scalar> reference_lasso(const std::vector<Vec<Scalar>>& columns, const Vec<Scalar>& target,
                            Scalar lambda, Scalar tol, Index max_passes = 100000) {
  if (columns.empty()) throw ValidationError("reference_lasso: no design columns");
  Mat<Scalar> design(target.size(), static_cast<Index>(columns.size()));
  for (size_t k = 0; k < columns.size(); ++k) {
    if (columns[k].size() != target.size())
      throw ShapeMismatchError("reference_lasso: column " + std::to_string(k) +
                               " length mismatch");
    design.col(static_cast<Index>(k)) = columns[k];
  }
  LassoResult<Scalar> res = cyclic_lasso<Scalar>(design, target, lambda, tol, max_passes);
  if (!res.converged)
    throw NotConvergedError("reference_lasso: KKT residual " + std::to_string(res.kkt_residual) +
                            " after " + std::to_string(res.passes) + " passes (tol " +
                            std::to_string(tol) + ")");
  return res.beta;
}

}  // namespace sparsenet
