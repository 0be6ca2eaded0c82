#pragma once

// Dense p x p matrix container for sample correlation/covariance, sparse
// estimates and precision matrices. The upper triangle is authoritative;
// construction mirrors it onto the lower triangle, except for the
// cross-correlation kind which is a full (generally asymmetric) matrix.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "sparsenet/errors.hpp"
#include "sparsenet/types.hpp"

namespace sparsenet {

enum class MatrixKind { covariance, correlation, cross_correlation, precision, sparse_estimate };

inline const char* to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::covariance: return "covariance";
    case MatrixKind::correlation: return "correlation";
    case MatrixKind::cross_correlation: return "cross-correlation";
    case MatrixKind::precision: return "precision";
    case MatrixKind::sparse_estimate: return "sparse-estimate";
  }
  return "?";
}

template <class Scalar>
struct SymmetricMatrixT {
  Mat<Scalar> entries;  // p x p
  MatrixKind kind = MatrixKind::covariance;
  std::optional<Scalar> lambda;  // sparsity value attached to estimates

  Index dim() const { return entries.rows(); }
  bool symmetric_kind() const { return kind != MatrixKind::cross_correlation; }
};

using SymmetricMatrix = SymmetricMatrixT<double>;

namespace detail {

template <class Scalar>
SymmetricMatrixT<Scalar> make_symmetric_impl(Mat<Scalar> entries, MatrixKind kind,
                                             std::optional<Scalar> lambda) {
  if (entries.rows() != entries.cols())
    throw ShapeMismatchError("matrix must be square, got " + std::to_string(entries.rows()) +
                             "x" + std::to_string(entries.cols()));
  if (!entries.allFinite()) throw NonFiniteError("matrix contains non-finite entries");

  const Scalar tol =
      std::max(Scalar(1e-12), Scalar(100) * std::numeric_limits<Scalar>::epsilon());
  if (kind == MatrixKind::cross_correlation) {
    if ((entries.array().abs() > Scalar(1) + tol).any())
      throw ValidationError("cross-correlation entries must lie in [-1, 1]");
  } else {
    // Upper triangle is authoritative.
    for (Index j = 0; j < entries.cols(); ++j)
      for (Index i = 0; i < j; ++i) entries(j, i) = entries(i, j);
    if (kind == MatrixKind::correlation) {
      if ((entries.diagonal().array() - Scalar(1)).abs().maxCoeff() > tol)
        throw ValidationError("correlation diagonal must be 1");
      if ((entries.array().abs() > Scalar(1) + tol).any())
        throw ValidationError("correlation entries must lie in [-1, 1]");
    }
  }
  return SymmetricMatrixT<Scalar>{std::move(entries), kind, lambda};
}

}  // namespace detail

template <class Derived>
SymmetricMatrixT<typename Derived::Scalar> make_symmetric(
    const Eigen::MatrixBase<Derived>& entries, MatrixKind kind,
    std::optional<typename Derived::Scalar> lambda = std::nullopt) {
  return detail::make_symmetric_impl<typename Derived::Scalar>(entries, kind, lambda);
}

template <class Scalar>
SymmetricMatrixT<Scalar> make_symmetric(Mat<Scalar>&& entries, MatrixKind kind,
                                        std::optional<Scalar> lambda = std::nullopt) {
  return detail::make_symmetric_impl<Scalar>(std::move(entries), kind, lambda);
}

// Largest off-diagonal magnitude; 0 for p < 2.
template <class Scalar>
Scalar max_offdiagonal(const SymmetricMatrixT<Scalar>& m) {
  Scalar best = 0;
  for (Index j = 0; j < m.dim(); ++j)
    for (Index i = 0; i < m.dim(); ++i)
      if (i != j) best = std::max(best, std::abs(m.entries(i, j)));
  return best;
}

}  // namespace sparsenet
