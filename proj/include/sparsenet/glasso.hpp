#pragma once

// L1-penalized inverse-covariance estimation.
//
// glasso_fit runs block coordinate descent over columns: for column j the
// subproblem in (theta_12, theta_22) given Theta_11 reduces to a lasso with
// quadratic term (s_jj + lambda) * Theta_11^{-1}, solved by cyclic coordinate
// descent, followed by a closed-form theta_22. Each column update minimizes
// the penalized negative log-likelihood exactly over that block, so the
// objective trace is monotone sweep by sweep. W = Theta^{-1} is maintained
// alongside Theta through rank-one block-inverse updates.
//
// screen_partition thresholds |s_ij| > lambda; its connected components are
// exactly the block structure of the solution, which glasso_fit_screened
// exploits by solving each block independently.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sparsenet/errors.hpp"
#include "sparsenet/filtration.hpp"
#include "sparsenet/parallel.hpp"
#include "sparsenet/symmetric_matrix.hpp"
#include "sparsenet/types.hpp"

namespace sparsenet {

using ScreeningPartition = GraphPartition;

struct GlassoOptions {
  double tol = 1e-6;             // on max |W - W_prev| per sweep, relative to mean |diag S|
  Index max_sweeps = 200;
  bool penalize_diagonal = true;
  double inner_tol = 1e-11;      // coordinate-change tolerance of the column lasso
  Index inner_max_passes = 1000;
  bool track_objective = true;
  int threads = 0;               // screened block solves; 0 = SPARSENET_THREADS or 1
};

template <class Scalar>
struct GlassoSolutionT {
  SymmetricMatrixT<Scalar> precision;   // Theta, kind precision
  SymmetricMatrixT<Scalar> covariance;  // W = Theta^{-1}, kind covariance
  Scalar lambda = 0;
  Scalar objective = 0;  // log det Theta - tr(Theta S) - penalty
  Index iterations = 0;  // outer sweeps
  bool converged = false;
  Scalar kkt_residual = 0;
  std::vector<Scalar> objective_trace;  // per sweep
};

using GlassoSolution = GlassoSolutionT<double>;

namespace detail {

template <class Scalar>
Scalar penalized_loglik_impl(const Mat<Scalar>& precision, const Mat<Scalar>& s, Scalar lambda,
                             bool penalize_diagonal) {
  Eigen::LLT<Mat<Scalar>> llt(precision);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefiniteError("penalized_loglik: precision is not positive definite");
  Scalar logdet = 0;
  for (Index i = 0; i < precision.rows(); ++i)
    logdet += Scalar(2) * std::log(llt.matrixL()(i, i));
  Scalar penalty = precision.template lpNorm<1>();
  if (!penalize_diagonal) penalty -= precision.diagonal().template lpNorm<1>();
  return logdet - precision.cwiseProduct(s).sum() - lambda * penalty;
}

// Max violation of the stationarity conditions W = S + lambda * sign(Theta).
template <class Scalar>
Scalar glasso_kkt_residual(const Mat<Scalar>& theta, const Mat<Scalar>& w, const Mat<Scalar>& s,
                           Scalar lambda, bool penalize_diagonal) {
  Scalar worst = 0;
  for (Index j = 0; j < theta.cols(); ++j)
    for (Index i = 0; i <= j; ++i) {
      const Scalar gap = w(i, j) - s(i, j);
      const bool penalized = penalize_diagonal || i != j;
      Scalar v;
      if (!penalized)
        v = std::abs(gap);
      else if (theta(i, j) != Scalar(0))
        v = std::abs(gap - lambda * (theta(i, j) > Scalar(0) ? Scalar(1) : Scalar(-1)));
      else
        v = std::max(Scalar(0), std::abs(gap) - lambda);
      worst = std::max(worst, v);
    }
  return worst;
}

template <class Scalar>
void validate_glasso_input(const SymmetricMatrixT<Scalar>& s, Scalar lambda) {
  if (!s.symmetric_kind())
    throw ValidationError("glasso expects a symmetric matrix kind");
  if (s.dim() < 1) throw EmptyMatrixError("glasso needs p >= 1");
  if ((s.entries.diagonal().array() < Scalar(-1e-15)).any())
    throw ValidationError("glasso requires a nonnegative diagonal");
  if (lambda < Scalar(0)) throw ValidationError("glasso requires lambda >= 0");
}

}  // namespace detail

// log det(Theta) - tr(Theta S) - lambda * sum |Theta_ij| (all entries by
// default; the off-diagonal-only convention drops the diagonal from the sum).
template <class Scalar>
Scalar penalized_loglik(const SymmetricMatrixT<Scalar>& precision,
                        const SymmetricMatrixT<Scalar>& s, Scalar lambda,
                        bool penalize_diagonal = true) {
  if (precision.dim() != s.dim())
    throw ShapeMismatchError("penalized_loglik: dimension mismatch");
  return detail::penalized_loglik_impl(precision.entries, s.entries, lambda, penalize_diagonal);
}

// Connected components of {(i,j) : |s_ij| > lambda}. These equal the
// components of the fitted zero-pattern graph at the same lambda.
template <class Scalar>
ScreeningPartition screen_partition(const SymmetricMatrixT<Scalar>& s, Scalar lambda) {
  if (!s.symmetric_kind())
    throw ValidationError("screen_partition expects a symmetric matrix kind");
  UnionFind uf(s.dim());
  for (Index j = 1; j < s.dim(); ++j)
    for (Index i = 0; i < j; ++i)
      if (std::abs(s.entries(i, j)) > lambda) uf.unite(i, j);
  return detail::partition_from(uf);
}

template <class Scalar>
GlassoSolutionT<Scalar> glasso_fit(const SymmetricMatrixT<Scalar>& s_input, Scalar lambda,
                                   const GlassoOptions& opts = {},
                                   const Mat<Scalar>* warm_precision = nullptr) {
  detail::validate_glasso_input(s_input, lambda);
  const Mat<Scalar>& s = s_input.entries;
  const Index p = s.rows();

  GlassoSolutionT<Scalar> sol;
  sol.lambda = lambda;

  auto finalize = [&](Mat<Scalar> theta, Index sweeps, bool converged) {
    Eigen::LLT<Mat<Scalar>> llt(theta);
    if (llt.info() != Eigen::Success)
      throw NotPositiveDefiniteError("glasso: iterate lost positive definiteness");
    Mat<Scalar> w_exact = llt.solve(Mat<Scalar>::Identity(p, p));
    w_exact = ((w_exact + w_exact.transpose()) / Scalar(2)).eval();
    sol.kkt_residual =
        detail::glasso_kkt_residual(theta, w_exact, s, lambda, opts.penalize_diagonal);
    sol.objective = detail::penalized_loglik_impl(theta, s, lambda, opts.penalize_diagonal);
    sol.iterations = sweeps;
    sol.converged = converged;
    sol.precision = make_symmetric(std::move(theta), MatrixKind::precision,
                                   std::optional<Scalar>(lambda));
    sol.covariance = make_symmetric(std::move(w_exact), MatrixKind::covariance,
                                    std::optional<Scalar>(lambda));
    return sol;
  };

  // lambda = 0 has no penalty: the MLE is S^{-1} and needs S positive definite.
  if (lambda == Scalar(0)) {
    Eigen::LLT<Mat<Scalar>> llt(s);
    if (llt.info() != Eigen::Success)
      throw NotPositiveDefiniteError("glasso: lambda = 0 requires positive definite S");
    Mat<Scalar> theta = llt.solve(Mat<Scalar>::Identity(p, p));
    theta = ((theta + theta.transpose()) / Scalar(2)).eval();
    return finalize(std::move(theta), 0, true);
  }

  Vec<Scalar> c(p);  // W_jj is pinned at this value throughout
  for (Index j = 0; j < p; ++j) {
    c[j] = s(j, j) + (opts.penalize_diagonal ? lambda : Scalar(0));
    if (c[j] <= Scalar(0))
      throw ValidationError("glasso: s_jj + penalty must be positive (column " +
                            std::to_string(j) + ")");
  }

  Mat<Scalar> theta, w;
  if (warm_precision != nullptr) {
    theta = *warm_precision;
    Eigen::LLT<Mat<Scalar>> llt(theta);
    if (llt.info() != Eigen::Success)
      throw NotPositiveDefiniteError("glasso: warm start is not positive definite");
    w = llt.solve(Mat<Scalar>::Identity(p, p));
    w = ((w + w.transpose()) / Scalar(2)).eval();
  } else {
    theta = Mat<Scalar>(c.cwiseInverse().asDiagonal());
    w = Mat<Scalar>(c.asDiagonal());
  }

  if (p == 1) return finalize(std::move(theta), 0, true);

  Scalar scale = s.diagonal().cwiseAbs().mean();
  if (scale <= Scalar(0)) scale = Scalar(1);

  std::vector<Index> rest(static_cast<size_t>(p - 1));
  Mat<Scalar> v(p - 1, p - 1);
  Vec<Scalar> w12(p - 1), s12(p - 1), u(p - 1), q(p - 1);
  Mat<Scalar> w_prev;

  bool converged = false;
  Index sweep = 0;
  while (sweep < opts.max_sweeps && !converged) {
    ++sweep;
    w_prev = w;
    for (Index j = 0; j < p; ++j) {
      for (Index k = 0; k < p - 1; ++k) rest[static_cast<size_t>(k)] = k < j ? k : k + 1;

      w12 = w(rest, j);
      v = w(rest, rest);
      v.noalias() -= (w12 * w12.transpose()) / w(j, j);
      s12 = s(rest, j);
      u = theta(rest, j);
      q.noalias() = v * u;

      // Cyclic CD on 1/2 c u^T V u + s12^T u + lambda ||u||_1.
      for (Index pass = 0; pass < opts.inner_max_passes; ++pass) {
        Scalar max_change = 0;
        for (Index k = 0; k < p - 1; ++k) {
          const Scalar vkk = v(k, k);
          if (vkk <= Scalar(0))
            throw NotPositiveDefiniteError("glasso: conditional covariance lost definiteness");
          const Scalar a = c[j] * vkk;
          const Scalar b = c[j] * (q[k] - vkk * u[k]) + s12[k];
          const Scalar updated = soft_threshold_scalar(-b, lambda) / a;
          const Scalar delta = updated - u[k];
          if (delta != Scalar(0)) {
            q += v.col(k) * delta;
            u[k] = updated;
            max_change = std::max(max_change, std::abs(delta));
          }
        }
        if (max_change <=
            static_cast<Scalar>(opts.inner_tol) * (Scalar(1) + u.cwiseAbs().maxCoeff()))
          break;
      }

      const Scalar t = Scalar(1) / c[j];
      theta(rest, j) = u;
      theta(j, rest) = u.transpose();
      theta(j, j) = t + u.dot(q);

      w(j, j) = c[j];
      w12 = -c[j] * q;
      w(rest, j) = w12;
      w(j, rest) = w12.transpose();
      v.noalias() += c[j] * (q * q.transpose());
      w(rest, rest) = v;
    }

    const Scalar delta_w = (w - w_prev).cwiseAbs().maxCoeff();
    if (opts.track_objective)
      sol.objective_trace.push_back(
          detail::penalized_loglik_impl(theta, s, lambda, opts.penalize_diagonal));
    converged = delta_w <= static_cast<Scalar>(opts.tol) * scale;
  }

  return finalize(std::move(theta), sweep, converged);
}

// Screens, solves each block independently (optionally in parallel) and
// assembles the block-diagonal solution; cross-block entries are exact zeros.
template <class Scalar>
GlassoSolutionT<Scalar> glasso_fit_screened(const SymmetricMatrixT<Scalar>& s_input,
                                            Scalar lambda, const GlassoOptions& opts = {}) {
  detail::validate_glasso_input(s_input, lambda);
  if (lambda == Scalar(0)) return glasso_fit(s_input, lambda, opts);

  const Mat<Scalar>& s = s_input.entries;
  const Index p = s.rows();
  ScreeningPartition part = screen_partition(s_input, lambda);

  const size_t nblocks = part.components.size();
  std::vector<GlassoSolutionT<Scalar>> block_solutions(nblocks);
  std::vector<char> is_singleton(nblocks, 0);

  parallel_for(static_cast<Index>(nblocks), opts.threads, [&](Index b) {
    const auto& nodes = part.components[static_cast<size_t>(b)];
    if (nodes.size() == 1) {
      is_singleton[static_cast<size_t>(b)] = 1;
      return;
    }
    std::vector<Index> idx(nodes.begin(), nodes.end());
    Mat<Scalar> sub = s(idx, idx);
    try {
      block_solutions[static_cast<size_t>(b)] =
          glasso_fit(SymmetricMatrixT<Scalar>{std::move(sub), s_input.kind, std::nullopt},
                     lambda, opts);
    } catch (const ConvergenceError& e) {
      throw NotConvergedError("glasso block " + std::to_string(b) + " (first node " +
                              std::to_string(nodes.front()) + "): " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("glasso block " + std::to_string(b) + " (first node " +
                            std::to_string(nodes.front()) + "): " + e.what());
    }
  });

  Mat<Scalar> theta = Mat<Scalar>::Zero(p, p);
  Mat<Scalar> w = Mat<Scalar>::Zero(p, p);
  GlassoSolutionT<Scalar> sol;
  sol.lambda = lambda;
  sol.converged = true;
  Scalar objective = 0;
  size_t max_trace = 0;

  for (size_t b = 0; b < nblocks; ++b) {
    const auto& nodes = part.components[b];
    if (is_singleton[b]) {
      const Index vtx = nodes.front();
      const Scalar cb = s(vtx, vtx) + (opts.penalize_diagonal ? lambda : Scalar(0));
      if (cb <= Scalar(0))
        throw ValidationError("glasso: s_jj + penalty must be positive (column " +
                              std::to_string(vtx) + ")");
      theta(vtx, vtx) = Scalar(1) / cb;
      w(vtx, vtx) = cb;
      objective += std::log(Scalar(1) / cb) - s(vtx, vtx) / cb -
                   (opts.penalize_diagonal ? lambda / cb : Scalar(0));
      continue;
    }
    const auto& bs = block_solutions[b];
    std::vector<Index> idx(nodes.begin(), nodes.end());
    theta(idx, idx) = bs.precision.entries;
    w(idx, idx) = bs.covariance.entries;
    objective += bs.objective;
    sol.converged = sol.converged && bs.converged;
    sol.iterations = std::max(sol.iterations, bs.iterations);
    max_trace = std::max(max_trace, bs.objective_trace.size());
  }

  // Per-sweep trace of the assembled iterate: sum of block traces, shorter
  // blocks held at their converged value. Monotone because each block is.
  if (opts.track_objective && max_trace > 0) {
    sol.objective_trace.assign(max_trace, 0);
    for (size_t t = 0; t < max_trace; ++t) {
      for (size_t b = 0; b < nblocks; ++b) {
        const auto& nodes = part.components[b];
        if (is_singleton[b]) {
          const Index vtx = nodes.front();
          sol.objective_trace[t] += std::log(theta(vtx, vtx)) - s(vtx, vtx) * theta(vtx, vtx) -
                                    (opts.penalize_diagonal ? lambda * theta(vtx, vtx) : Scalar(0));
          continue;
        }
        const auto& trace = block_solutions[b].objective_trace;
        if (trace.empty())
          sol.objective_trace[t] += block_solutions[b].objective;
        else
          sol.objective_trace[t] += trace[std::min(t, trace.size() - 1)];
      }
    }
  }

  sol.kkt_residual = detail::glasso_kkt_residual(theta, w, s, lambda, opts.penalize_diagonal);
  sol.objective = objective;
  sol.precision =
      make_symmetric(std::move(theta), MatrixKind::precision, std::optional<Scalar>(lambda));
  sol.covariance =
      make_symmetric(std::move(w), MatrixKind::covariance, std::optional<Scalar>(lambda));
  return sol;
}

// Solves the grid in descending order with warm starts; results are returned
// aligned with the (ascending) grid.
template <class Scalar>
std::vector<GlassoSolutionT<Scalar>> glasso_path(const SymmetricMatrixT<Scalar>& s,
                                                 const LambdaGrid& grid,
                                                 const GlassoOptions& opts = {}) {
  std::vector<GlassoSolutionT<Scalar>> out(grid.size());
  const Mat<Scalar>* warm = nullptr;
  Mat<Scalar> warm_storage;
  for (size_t t = grid.size(); t-- > 0;) {
    out[t] = glasso_fit(s, static_cast<Scalar>(grid.values[t]), opts, warm);
    warm_storage = out[t].precision.entries;
    warm = &warm_storage;
  }
  return out;
}

}  // namespace sparsenet
