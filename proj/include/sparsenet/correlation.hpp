#pragma once

// Sample correlation, cross-correlation and rank diagnostics for
// centered, unit-norm data.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "sparsenet/data_matrix.hpp"
#include "sparsenet/soft_threshold.hpp"
#include "sparsenet/symmetric_matrix.hpp"

namespace sparsenet {

// S = X^T X as one rank-n symmetric product; diagonal pinned to 1.
template <class Scalar>
SymmetricMatrixT<Scalar> sample_correlation(const DataMatrixT<Scalar>& data) {
  if (data.normalization != Normalization::centered_unit_norm)
    throw NotNormalizedError("sample_correlation requires centered unit-norm data");
  const Index p = data.p();
  Mat<Scalar> s = Mat<Scalar>::Zero(p, p);
  s.template selfadjointView<Eigen::Upper>().rankUpdate(data.values.transpose());
  s.diagonal().setOnes();
  return make_symmetric(std::move(s), MatrixKind::correlation);
}

// Entry (i, j) = x(v_i)^T y(v_j); generally asymmetric.
template <class Scalar>
SymmetricMatrixT<Scalar> sample_cross_correlation(const DataMatrixT<Scalar>& x,
                                                  const DataMatrixT<Scalar>& y) {
  if (x.normalization != Normalization::centered_unit_norm ||
      y.normalization != Normalization::centered_unit_norm)
    throw NotNormalizedError("sample_cross_correlation requires centered unit-norm data");
  if (x.n() != y.n() || x.p() != y.p())
    throw ShapeMismatchError("paired data must share dimensions, got " +
                             std::to_string(x.n()) + "x" + std::to_string(x.p()) + " vs " +
                             std::to_string(y.n()) + "x" + std::to_string(y.p()));
  Mat<Scalar> c = x.values.transpose() * y.values;
  return make_symmetric(std::move(c), MatrixKind::cross_correlation);
}

// Largest off-diagonal |correlation|, computed in column panels without
// materializing the p x p matrix.
template <class Scalar>
double max_offdiagonal(const DataMatrixT<Scalar>& data, Index panel = 1024) {
  if (data.normalization != Normalization::centered_unit_norm)
    throw NotNormalizedError("max_offdiagonal requires centered unit-norm data");
  if (panel < 1) throw ValidationError("panel width must be positive");
  const Index p = data.p();
  double best = 0;
  Mat<Scalar> strip;
  for (Index i0 = 0; i0 < p; i0 += panel) {
    const Index width = std::min(panel, p - i0);
    strip.noalias() = data.values.middleCols(i0, width).transpose() * data.values;
    for (Index r = 0; r < width; ++r)
      for (Index j = i0 + r + 1; j < p; ++j)
        best = std::max(best, std::abs(static_cast<double>(strip(r, j))));
  }
  return best;
}

// Grid over [0, max off-diagonal |correlation|] straight from the data.
template <class Scalar>
LambdaGrid lambda_grid_from_data(const DataMatrixT<Scalar>& data, Index count,
                                 Index panel = 1024) {
  if (data.p() < 2) throw EmptyMatrixError("lambda grid needs p >= 2");
  return data_driven_grid(max_offdiagonal(data, panel), count);
}

struct RankDiagnostic {
  Index rank = 0;
  bool deficient = false;
  double tol_used = 0;
  double largest_singular_value = 0;
};

// Rank = number of singular values above tol. Default tol is
// dim * machine epsilon * largest singular value.
template <class Scalar>
RankDiagnostic rank_diagnostic(const SymmetricMatrixT<Scalar>& m, Scalar tol = Scalar(-1)) {
  if (!m.symmetric_kind())
    throw ValidationError("rank_diagnostic requires a symmetric matrix kind");
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> eig(m.entries, Eigen::EigenvaluesOnly);
  const Vec<Scalar> sv = eig.eigenvalues().cwiseAbs();
  const Scalar largest = sv.maxCoeff();
  if (tol < Scalar(0))
    tol = static_cast<Scalar>(m.dim()) * std::numeric_limits<Scalar>::epsilon() * largest;
  else if (tol == Scalar(0))
    throw ValidationError("rank tolerance must be positive");
  RankDiagnostic d;
  d.rank = (sv.array() > tol).count();
  d.deficient = d.rank < m.dim();
  d.tol_used = static_cast<double>(tol);
  d.largest_singular_value = static_cast<double>(largest);
  return d;
}

}  // namespace sparsenet
