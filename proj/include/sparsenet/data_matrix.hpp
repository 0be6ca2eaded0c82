#pragma once

// Data matrices: rows are subjects/images, columns are nodes/voxels.
// Normalization brings every column to zero mean and unit Euclidean norm,
// so inner products of columns are sample correlations.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sparsenet/errors.hpp"
#include "sparsenet/types.hpp"

namespace sparsenet {

enum class Normalization { raw, centered, centered_unit_norm };

inline constexpr double kCenterTol = 1e-10;
inline constexpr double kUnitNormTol = 1e-10;
inline constexpr double kConstantColumnTol = 1e-12;

template <class Scalar>
struct DataMatrixT {
  Mat<Scalar> values;  // n x p
  Normalization normalization = Normalization::raw;
  std::vector<std::string> names;  // optional node names; empty or size p

  Index n() const { return values.rows(); }
  Index p() const { return values.cols(); }
};

using DataMatrix = DataMatrixT<double>;

namespace detail {

template <class Scalar>
DataMatrixT<Scalar> make_data_matrix_impl(Mat<Scalar> values, Normalization normalization,
                                          std::vector<std::string> names) {
  if (values.rows() < 2 || values.cols() < 1)
    throw ValidationError("data matrix needs n >= 2 rows and p >= 1 columns, got " +
                          std::to_string(values.rows()) + "x" + std::to_string(values.cols()));
  if (!values.allFinite()) throw NonFiniteError("data matrix contains non-finite entries");
  if (!names.empty() && static_cast<Index>(names.size()) != values.cols())
    throw ShapeMismatchError("node name count does not match column count");
  if (normalization != Normalization::raw) {
    const Scalar base = std::max(static_cast<Scalar>(kCenterTol),
                                 Scalar(100) * std::numeric_limits<Scalar>::epsilon());
    const Scalar center_tol = base * static_cast<Scalar>(values.rows());
    const Scalar norm_tol = base;
    for (Index j = 0; j < values.cols(); ++j) {
      if (std::abs(values.col(j).sum()) > center_tol)
        throw NotNormalizedError("column " + std::to_string(j) + " is not centered");
      if (normalization == Normalization::centered_unit_norm &&
          std::abs(values.col(j).squaredNorm() - Scalar(1)) > norm_tol)
        throw NotNormalizedError("column " + std::to_string(j) + " is not unit norm");
    }
  }
  return DataMatrixT<Scalar>{std::move(values), normalization, std::move(names)};
}

}  // namespace detail

template <class Derived>
DataMatrixT<typename Derived::Scalar> make_data_matrix(
    const Eigen::MatrixBase<Derived>& values,
    Normalization normalization = Normalization::raw, std::vector<std::string> names = {}) {
  return detail::make_data_matrix_impl<typename Derived::Scalar>(values, normalization,
                                                                 std::move(names));
}

template <class Scalar>
DataMatrixT<Scalar> make_data_matrix(Mat<Scalar>&& values,
                                     Normalization normalization = Normalization::raw,
                                     std::vector<std::string> names = {}) {
  return detail::make_data_matrix_impl<Scalar>(std::move(values), normalization,
                                               std::move(names));
}

enum class ConstantColumnPolicy { fail, drop };

template <class Scalar>
struct NormalizeResult {
  DataMatrixT<Scalar> data;
  std::vector<Index> kept;     // kept[i] = original index of output column i
  std::vector<Index> dropped;  // original indices of removed constant columns
};

// Centers every column. Constant columns survive (they become zero columns).
template <class Scalar>
DataMatrixT<Scalar> center(const DataMatrixT<Scalar>& data) {
  Mat<Scalar> out = data.values;
  out.rowwise() -= data.values.colwise().mean();
  return DataMatrixT<Scalar>{std::move(out), Normalization::centered, data.names};
}

// Centers and rescales every column to unit Euclidean norm. Columns whose
// centered norm falls below kConstantColumnTol are constant: the policy
// either fails on the first one or drops them all, reporting the index map.
template <class Scalar>
NormalizeResult<Scalar> normalize(const DataMatrixT<Scalar>& data,
                                  ConstantColumnPolicy policy = ConstantColumnPolicy::fail) {
  if (data.n() < 2) throw ValidationError("normalize needs n >= 2");
  if (!data.values.allFinite()) throw NonFiniteError("normalize: non-finite input");

  Mat<Scalar> centered = data.values;
  centered.rowwise() -= data.values.colwise().mean();

  std::vector<Index> kept, dropped;
  kept.reserve(static_cast<size_t>(data.p()));
  for (Index j = 0; j < data.p(); ++j) {
    if (centered.col(j).norm() < static_cast<Scalar>(kConstantColumnTol)) {
      if (policy == ConstantColumnPolicy::fail) throw ConstantColumnError(j);
      dropped.push_back(j);
    } else {
      kept.push_back(j);
    }
  }

  Mat<Scalar> out(data.n(), static_cast<Index>(kept.size()));
  std::vector<std::string> names;
  if (!data.names.empty()) names.reserve(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    const Index j = kept[i];
    out.col(static_cast<Index>(i)) = centered.col(j) / centered.col(j).norm();
    if (!data.names.empty()) names.push_back(data.names[static_cast<size_t>(j)]);
  }

  NormalizeResult<Scalar> result;
  result.data = DataMatrixT<Scalar>{std::move(out), Normalization::centered_unit_norm,
                                    std::move(names)};
  result.kept = std::move(kept);
  result.dropped = std::move(dropped);
  return result;
}

}  // namespace sparsenet
