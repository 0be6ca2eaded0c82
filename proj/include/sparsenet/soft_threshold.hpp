#pragma once

// Closed-form sparse correlation and cross-correlation estimators.
// With unit-norm columns the L1-penalized per-pair regressions decouple,
// and each coefficient is the soft-threshold of the sample (cross-)
// correlation. No numeric optimization is involved.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sparsenet/errors.hpp"
#include "sparsenet/symmetric_matrix.hpp"
#include "sparsenet/types.hpp"

namespace sparsenet {

template <class Scalar>
Scalar soft_threshold_scalar(Scalar r, Scalar lambda) {
  if (!std::isfinite(static_cast<double>(r)) || !std::isfinite(static_cast<double>(lambda)))
    throw NonFiniteError("soft_threshold_scalar: non-finite input");
  if (lambda < Scalar(0)) throw ValidationError("soft_threshold_scalar: lambda must be >= 0");
  if (r > lambda) return r - lambda;
  if (r < -lambda) return r + lambda;
  return Scalar(0);
}

enum class EstimateSource { correlation, cross_correlation };

// Dense matrices are kept whole below this dimension; larger estimates are
// stored as nonzero triplets.
inline constexpr Index kDenseStorageLimit = 2000;

template <class Scalar>
struct SparseEstimateT {
  struct Entry {
    Index i, j;
    Scalar value;
  };

  Index dim = 0;
  Scalar lambda = 0;
  EstimateSource source = EstimateSource::correlation;
  Index nnz = 0;  // nonzero entries, not counting the fixed unit diagonal
                  // of correlation estimates

  bool dense_storage = true;
  Mat<Scalar> dense;             // when dense_storage
  std::vector<Entry> triplets;   // when !dense_storage

  // Visits every stored nonzero (the pinned unit diagonal of correlation
  // estimates is not visited).
  template <class Fn>
  void for_each_nonzero(Fn&& fn) const {
    if (dense_storage) {
      for (Index j = 0; j < dim; ++j)
        for (Index i = 0; i < dim; ++i) {
          if (source == EstimateSource::correlation && i == j) continue;
          if (dense(i, j) != Scalar(0)) fn(i, j, dense(i, j));
        }
    } else {
      for (const Entry& e : triplets) fn(e.i, e.j, e.value);
    }
  }

  Mat<Scalar> to_dense() const {
    if (dense_storage) return dense;
    Mat<Scalar> out = Mat<Scalar>::Zero(dim, dim);
    if (source == EstimateSource::correlation) out.diagonal().setOnes();
    for (const Entry& e : triplets) out(e.i, e.j) = e.value;
    return out;
  }

  SymmetricMatrixT<Scalar> to_symmetric() const {
    return make_symmetric(to_dense(), MatrixKind::sparse_estimate, lambda);
  }
};

using SparseEstimate = SparseEstimateT<double>;

// Soft-thresholds every off-diagonal entry of a correlation matrix; the
// diagonal stays 1 (self-correlation carries no penalty).
template <class Scalar>
SparseEstimateT<Scalar> sparse_correlation(const SymmetricMatrixT<Scalar>& corr, Scalar lambda,
                                           Index dense_limit = kDenseStorageLimit) {
  if (corr.kind != MatrixKind::correlation)
    throw ValidationError("sparse_correlation expects a correlation matrix");
  if (!std::isfinite(static_cast<double>(lambda)) || lambda < Scalar(0))
    throw ValidationError("sparse_correlation: lambda must be finite and >= 0");

  const Index p = corr.dim();
  SparseEstimateT<Scalar> est;
  est.dim = p;
  est.lambda = lambda;
  est.source = EstimateSource::correlation;
  est.dense_storage = p < dense_limit;
  if (est.dense_storage) {
    est.dense = Mat<Scalar>::Identity(p, p);
    for (Index j = 0; j < p; ++j)
      for (Index i = 0; i < j; ++i) {
        const Scalar v = soft_threshold_scalar(corr.entries(i, j), lambda);
        est.dense(i, j) = v;
        est.dense(j, i) = v;
        if (v != Scalar(0)) est.nnz += 2;
      }
  } else {
    for (Index j = 0; j < p; ++j)
      for (Index i = 0; i < j; ++i) {
        const Scalar v = soft_threshold_scalar(corr.entries(i, j), lambda);
        if (v != Scalar(0)) {
          est.triplets.push_back({i, j, v});
          est.triplets.push_back({j, i, v});
          est.nnz += 2;
        }
      }
  }
  return est;
}

// Soft-thresholds all p^2 entries of a cross-correlation matrix; the
// diagonal is an ordinary estimate here, not identically 1.
template <class Scalar>
SparseEstimateT<Scalar> sparse_cross_correlation(const SymmetricMatrixT<Scalar>& cross,
                                                 Scalar lambda,
                                                 Index dense_limit = kDenseStorageLimit) {
  if (cross.kind != MatrixKind::cross_correlation)
    throw ValidationError("sparse_cross_correlation expects a cross-correlation matrix");
  if (!std::isfinite(static_cast<double>(lambda)) || lambda < Scalar(0))
    throw ValidationError("sparse_cross_correlation: lambda must be finite and >= 0");

  const Index p = cross.dim();
  SparseEstimateT<Scalar> est;
  est.dim = p;
  est.lambda = lambda;
  est.source = EstimateSource::cross_correlation;
  est.dense_storage = p < dense_limit;
  if (est.dense_storage) est.dense.resize(p, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < p; ++i) {
      const Scalar v = soft_threshold_scalar(cross.entries(i, j), lambda);
      if (est.dense_storage)
        est.dense(i, j) = v;
      else if (v != Scalar(0))
        est.triplets.push_back({i, j, v});
      if (v != Scalar(0)) ++est.nnz;
    }
  return est;
}

enum class GridOrigin { explicit_values, uniform, data_driven };

struct LambdaGrid {
  std::vector<double> values;  // strictly increasing, first >= 0
  GridOrigin origin = GridOrigin::explicit_values;
  bool degenerate = false;  // single-point grid from an all-zero matrix

  size_t size() const { return values.size(); }
};

inline LambdaGrid make_lambda_grid(std::vector<double> values,
                                   GridOrigin origin = GridOrigin::explicit_values) {
  if (values.empty()) throw ValidationError("lambda grid must be non-empty");
  if (values.front() < 0) throw ValidationError("lambda grid values must be >= 0");
  for (size_t t = 1; t < values.size(); ++t)
    if (values[t] <= values[t - 1])
      throw ValidationError("lambda grid must be strictly increasing");
  return LambdaGrid{std::move(values), origin, false};
}

// Uniform grid over [0, max_value] inclusive.
inline LambdaGrid uniform_lambda_grid(Index count, double max_value) {
  if (count < 2) throw ValidationError("lambda grid needs count >= 2");
  if (max_value <= 0.0) throw ValidationError("lambda grid needs max_value > 0");
  std::vector<double> values(static_cast<size_t>(count));
  for (Index t = 0; t < count; ++t)
    values[static_cast<size_t>(t)] =
        max_value * static_cast<double>(t) / static_cast<double>(count - 1);
  values.front() = 0.0;
  values.back() = max_value;
  return LambdaGrid{std::move(values), GridOrigin::uniform, false};
}

// Uniform grid over [0, top] with exact endpoints: the top value must tie
// with the largest entry so the strict threshold empties the graph there.
// A zero top degenerates to the single-point grid {0}.
inline LambdaGrid data_driven_grid(double top, Index count) {
  if (count < 2) throw ValidationError("lambda grid needs count >= 2");
  if (top == 0.0) return LambdaGrid{{0.0}, GridOrigin::data_driven, true};
  std::vector<double> values(static_cast<size_t>(count));
  for (Index t = 0; t < count; ++t)
    values[static_cast<size_t>(t)] = top * static_cast<double>(t) / static_cast<double>(count - 1);
  values.front() = 0.0;
  values.back() = top;
  return LambdaGrid{std::move(values), GridOrigin::data_driven, false};
}

// Grid over [0, max off-diagonal |entry|] inclusive.
template <class Scalar>
LambdaGrid lambda_grid_from_data(const SymmetricMatrixT<Scalar>& m, Index count) {
  if (m.dim() < 2) throw EmptyMatrixError("lambda grid needs p >= 2");
  return data_driven_grid(static_cast<double>(max_offdiagonal(m)), count);
}

}  // namespace sparsenet
