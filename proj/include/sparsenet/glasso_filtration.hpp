#pragma once

// Runs the zero-pattern filtration (per-lambda glasso fits) and the
// sample-correlation threshold filtration side by side and compares the
// vertex partitions at every grid point. Edge sets are allowed to differ;
// the partitions must match.

#include <cmath>
#include <string>
#include <vector>

#include "sparsenet/correlation.hpp"
#include "sparsenet/data_matrix.hpp"
#include "sparsenet/filtration.hpp"
#include "sparsenet/glasso.hpp"

namespace sparsenet {

struct GlassoFiltrationResult {
  FiltrationResult zero_pattern;  // from fitted precision zero patterns
  FiltrationResult threshold;     // from thresholded sample correlation
  std::vector<char> partitions_equal;  // per lambda
  bool all_equal = true;
  std::vector<size_t> skipped;  // grid indices where glasso failed
  double zero_pattern_eps = 1e-8;
};

// Grid must be strictly positive. Failed grid points are skipped with a
// sentinel (kappa = 0) partition and recorded in `skipped`.
template <class Scalar>
GlassoFiltrationResult glasso_filtration(const DataMatrixT<Scalar>& data, const LambdaGrid& grid,
                                         const GlassoOptions& opts = {}, double eps = 1e-8) {
  if (grid.values.front() <= 0.0)
    throw ValidationError("glasso filtration requires a strictly positive grid");

  DataMatrixT<Scalar> unit = data;
  if (unit.normalization != Normalization::centered_unit_norm)
    unit = normalize(data).data;
  const SymmetricMatrixT<Scalar> s = sample_correlation(unit);

  GlassoFiltrationResult out;
  out.zero_pattern_eps = eps;
  out.threshold = build_filtration(s, grid, /*keep_edges=*/true);

  const size_t T = grid.size();
  out.zero_pattern.grid = grid;
  out.zero_pattern.beta0.assign(T, 0);
  out.zero_pattern.partitions.resize(T);
  out.zero_pattern.edge_counts.assign(T, 0);
  out.zero_pattern.edges.emplace(T);
  out.partitions_equal.assign(T, 0);

  for (size_t t = 0; t < T; ++t) {
    GlassoSolutionT<Scalar> fit;
    try {
      fit = glasso_fit_screened(s, static_cast<Scalar>(grid.values[t]), opts);
      if (!fit.converged)
        throw NotConvergedError("glasso did not converge at grid index " + std::to_string(t));
    } catch (const Error&) {
      out.skipped.push_back(t);
      continue;
    }
    AdjacencyMatrix adj = zero_pattern_adjacency(fit.precision, eps);
    adj.lambda = grid.values[t];
    out.zero_pattern.partitions[t] = connected_components(adj);
    out.zero_pattern.beta0[t] = out.zero_pattern.partitions[t].kappa;
    out.zero_pattern.edge_counts[t] = static_cast<Index>(adj.edges.size());
    (*out.zero_pattern.edges)[t] = adj.edges;
    out.partitions_equal[t] =
        out.zero_pattern.partitions[t] == out.threshold.partitions[t] ? 1 : 0;
  }
  for (size_t t = 0; t < T; ++t)
    if (!out.partitions_equal[t]) out.all_equal = false;
  return out;
}

}  // namespace sparsenet
