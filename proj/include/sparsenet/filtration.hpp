#pragma once

// Threshold graphs over lambda grids, connected components (beta_0) and the
// nested-partition structure they induce. The filtration is computed
// incrementally: lambda descends, edges stream in as thresholds fall, and a
// single union-find absorbs them, so the whole grid costs O(p^2 + E alpha(p)).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "sparsenet/data_matrix.hpp"
#include "sparsenet/errors.hpp"
#include "sparsenet/soft_threshold.hpp"
#include "sparsenet/symmetric_matrix.hpp"
#include "sparsenet/union_find.hpp"

namespace sparsenet {

enum class AdjacencySource { zero_pattern, threshold };

// How asymmetric (cross-correlation) inputs are folded to a single
// edge magnitude.
enum class SymmetrizeRule { max_abs, min_abs };

struct AdjacencyMatrix {
  Index dim = 0;
  std::vector<std::pair<Index, Index>> edges;  // i < j, sorted
  double lambda = 0;
  AdjacencySource source = AdjacencySource::threshold;
};

struct GraphPartition {
  std::vector<Index> labels;  // labels[v] = smallest node index in v's component
  Index kappa = 0;
  std::vector<std::vector<Index>> components;  // sorted nodes, ordered by label

  bool operator==(const GraphPartition& other) const { return labels == other.labels; }
};

namespace detail {

template <class Scalar>
double edge_magnitude(const SymmetricMatrixT<Scalar>& m, Index i, Index j, SymmetrizeRule rule) {
  if (m.symmetric_kind()) return std::abs(static_cast<double>(m.entries(i, j)));
  const double a = std::abs(static_cast<double>(m.entries(i, j)));
  const double b = std::abs(static_cast<double>(m.entries(j, i)));
  return rule == SymmetrizeRule::max_abs ? std::max(a, b) : std::min(a, b);
}

inline GraphPartition partition_from(UnionFind& uf) {
  const Index p = uf.size();
  GraphPartition part;
  part.labels.assign(static_cast<size_t>(p), Index(-1));
  std::vector<Index> slot(static_cast<size_t>(p), Index(-1));
  part.components.reserve(static_cast<size_t>(uf.count()));
  for (Index v = 0; v < p; ++v) {
    const Index root = uf.find(v);
    if (part.labels[static_cast<size_t>(root)] < 0) {
      // First node of a component is its smallest index, hence the label.
      part.labels[static_cast<size_t>(root)] = v;
      slot[static_cast<size_t>(v)] = static_cast<Index>(part.components.size());
      part.components.emplace_back();
    }
    const Index label = part.labels[static_cast<size_t>(root)];
    part.labels[static_cast<size_t>(v)] = label;
    part.components[static_cast<size_t>(slot[static_cast<size_t>(label)])].push_back(v);
  }
  part.kappa = uf.count();
  return part;
}

}  // namespace detail

// Edge (i, j) present iff |entry| is strictly greater than lambda.
template <class Scalar>
AdjacencyMatrix threshold_adjacency(const SymmetricMatrixT<Scalar>& m, double lambda,
                                    SymmetrizeRule rule = SymmetrizeRule::max_abs) {
  AdjacencyMatrix a;
  a.dim = m.dim();
  a.lambda = lambda;
  a.source = AdjacencySource::threshold;
  for (Index i = 0; i < m.dim(); ++i)
    for (Index j = i + 1; j < m.dim(); ++j)
      if (detail::edge_magnitude(m, i, j, rule) > lambda) a.edges.emplace_back(i, j);
  return a;
}

// Edge (i, j) present iff |entry| > eps; eps absorbs assembly round-off on
// top of the exact zeros coordinate descent produces.
template <class Scalar>
AdjacencyMatrix zero_pattern_adjacency(const SymmetricMatrixT<Scalar>& estimate,
                                       double eps = 1e-8,
                                       SymmetrizeRule rule = SymmetrizeRule::max_abs) {
  AdjacencyMatrix a = threshold_adjacency(estimate, eps, rule);
  a.source = AdjacencySource::zero_pattern;
  a.lambda = estimate.lambda.value_or(static_cast<Scalar>(eps));
  return a;
}

template <class Scalar>
AdjacencyMatrix zero_pattern_adjacency(const SparseEstimateT<Scalar>& estimate,
                                       double eps = 1e-8) {
  AdjacencyMatrix a;
  a.dim = estimate.dim;
  a.lambda = static_cast<double>(estimate.lambda);
  a.source = AdjacencySource::zero_pattern;
  estimate.for_each_nonzero([&](Index i, Index j, Scalar v) {
    if (i < j && std::abs(static_cast<double>(v)) > eps) a.edges.emplace_back(i, j);
    if (i > j && std::abs(static_cast<double>(v)) > eps) a.edges.emplace_back(j, i);
  });
  std::sort(a.edges.begin(), a.edges.end());
  a.edges.erase(std::unique(a.edges.begin(), a.edges.end()), a.edges.end());
  return a;
}

inline GraphPartition connected_components(const AdjacencyMatrix& a) {
  UnionFind uf(a.dim);
  for (const auto& [i, j] : a.edges) {
    if (i < 0 || j < 0 || i >= a.dim || j >= a.dim || i == j)
      throw ValidationError("adjacency edge out of range");
    uf.unite(i, j);
  }
  return detail::partition_from(uf);
}

struct FiltrationResult {
  LambdaGrid grid;
  std::vector<Index> beta0;                  // per-lambda component count
  std::vector<GraphPartition> partitions;    // per-lambda
  std::vector<Index> edge_counts;            // per-lambda
  std::optional<std::vector<std::vector<std::pair<Index, Index>>>> edges;  // on request
};

namespace detail {

// Buckets pair magnitudes by grid interval, then replays them into one
// union-find while lambda descends. scan(fn) must call fn(i, j, magnitude)
// for every pair i < j, in the same order on both invocations.
template <class ScanFn>
FiltrationResult bucket_filtration(Index p, const LambdaGrid& grid, bool keep_edges,
                                   ScanFn&& scan) {
  if (p < 1) throw EmptyMatrixError("filtration needs p >= 1");
  if (p > std::numeric_limits<std::int32_t>::max())
    throw ValidationError("filtration supports p < 2^31");
  const size_t T = grid.size();

  struct PackedEdge {
    std::int32_t i, j;
  };

  // Bucket t holds pairs with grid[t] < mag <= grid[t+1]; pairs at or below
  // grid[0] are never edges anywhere on the grid.
  auto bucket_of = [&](double mag) -> std::ptrdiff_t {
    auto it = std::lower_bound(grid.values.begin(), grid.values.end(), mag);
    return (it - grid.values.begin()) - 1;
  };

  std::vector<Index> bucket_count(T, 0);
  scan([&](Index, Index, double mag) {
    const std::ptrdiff_t t = bucket_of(mag);
    if (t >= 0) ++bucket_count[static_cast<size_t>(t)];
  });

  std::vector<std::vector<PackedEdge>> buckets(T);
  for (size_t t = 0; t < T; ++t) buckets[t].reserve(static_cast<size_t>(bucket_count[t]));
  scan([&](Index i, Index j, double mag) {
    const std::ptrdiff_t t = bucket_of(mag);
    if (t >= 0)
      buckets[static_cast<size_t>(t)].push_back(
          {static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)});
  });

  FiltrationResult result;
  result.grid = grid;
  result.beta0.resize(T);
  result.partitions.resize(T);
  result.edge_counts.resize(T);
  if (keep_edges) result.edges.emplace(T);

  UnionFind uf(p);
  std::vector<std::pair<Index, Index>> active;  // only maintained with keep_edges
  Index active_count = 0;
  for (size_t t = T; t-- > 0;) {
    for (const PackedEdge& e : buckets[t]) uf.unite(e.i, e.j);
    active_count += static_cast<Index>(buckets[t].size());
    if (keep_edges) {
      for (const PackedEdge& e : buckets[t]) active.emplace_back(e.i, e.j);
      auto sorted = active;
      std::sort(sorted.begin(), sorted.end());
      (*result.edges)[t] = std::move(sorted);
    }
    buckets[t].clear();
    buckets[t].shrink_to_fit();
    result.partitions[t] = detail::partition_from(uf);
    result.beta0[t] = result.partitions[t].kappa;
    result.edge_counts[t] = active_count;
  }
  return result;
}

}  // namespace detail

// Incremental filtration over a stored matrix. keep_edges retains per-lambda
// sorted edge lists (small-p use; memory grows with T * E).
template <class Scalar>
FiltrationResult build_filtration(const SymmetricMatrixT<Scalar>& m, const LambdaGrid& grid,
                                  bool keep_edges = false,
                                  SymmetrizeRule rule = SymmetrizeRule::max_abs) {
  return detail::bucket_filtration(m.dim(), grid, keep_edges, [&](auto&& fn) {
    for (Index i = 0; i < m.dim(); ++i)
      for (Index j = i + 1; j < m.dim(); ++j) fn(i, j, detail::edge_magnitude(m, i, j, rule));
  });
}

// Incremental filtration straight from normalized data: correlation products
// are computed in column panels, so the dense p x p matrix never
// materializes. Memory is one n x panel strip plus the surviving edge
// buckets, which is what admits p in the tens of thousands.
template <class Scalar>
FiltrationResult build_filtration(const DataMatrixT<Scalar>& data, const LambdaGrid& grid,
                                  bool keep_edges = false, Index panel = 1024) {
  if (data.normalization != Normalization::centered_unit_norm)
    throw NotNormalizedError("streaming filtration requires centered unit-norm data");
  if (panel < 1) throw ValidationError("panel width must be positive");
  const Index p = data.p();
  return detail::bucket_filtration(p, grid, keep_edges, [&](auto&& fn) {
    Mat<Scalar> strip;
    for (Index i0 = 0; i0 < p; i0 += panel) {
      const Index width = std::min(panel, p - i0);
      strip.noalias() =
          data.values.middleCols(i0, width).transpose() * data.values;  // width x p
      for (Index r = 0; r < width; ++r)
        for (Index j = i0 + r + 1; j < p; ++j)
          fn(i0 + r, j, std::abs(static_cast<double>(strip(r, j))));
    }
  });
}

struct NestednessReport {
  bool node_nested = true;
  std::optional<bool> edge_nested;         // absent when edges were not kept
  std::optional<size_t> first_violation;   // grid index whose sets fail to nest
};

// Checks that partitions refine as lambda increases (every component at
// lambda_{t+1} sits inside one component at lambda_t) and, when edge lists
// are available, that edge sets shrink. Inclusion is non-strict: equal
// consecutive graphs are fine.
inline NestednessReport verify_nestedness(const FiltrationResult& f) {
  if (f.grid.size() < 2) throw ValidationError("nestedness needs >= 2 grid points");
  for (const GraphPartition& part : f.partitions)
    if (part.labels.empty())
      throw ValidationError("nestedness undefined: filtration has skipped grid points");
  NestednessReport report;
  for (size_t t = 0; t + 1 < f.partitions.size(); ++t) {
    const auto& coarse = f.partitions[t].labels;
    for (const auto& comp : f.partitions[t + 1].components) {
      const Index want = coarse[static_cast<size_t>(comp.front())];
      for (Index v : comp)
        if (coarse[static_cast<size_t>(v)] != want) {
          report.node_nested = false;
          if (!report.first_violation) report.first_violation = t + 1;
          break;
        }
      if (!report.node_nested) break;
    }
    if (!report.node_nested) break;
  }
  if (f.edges) {
    report.edge_nested = true;
    for (size_t t = 0; t + 1 < f.edges->size(); ++t) {
      const auto& wide = (*f.edges)[t];
      const auto& narrow = (*f.edges)[t + 1];
      if (!std::includes(wide.begin(), wide.end(), narrow.begin(), narrow.end())) {
        report.edge_nested = false;
        if (!report.first_violation || *report.first_violation > t + 1)
          report.first_violation = t + 1;
        break;
      }
    }
  }
  return report;
}

struct BlockPermutation {
  std::vector<Index> order;  // order[k] = original node at permuted position k
  GraphPartition blocks;
};

// Groups nodes by connected component: components ordered by size
// descending, ties by smallest original index; ascending index inside each.
inline BlockPermutation block_permutation(const AdjacencyMatrix& a) {
  BlockPermutation bp;
  bp.blocks = connected_components(a);
  std::vector<size_t> comp_order(bp.blocks.components.size());
  for (size_t c = 0; c < comp_order.size(); ++c) comp_order[c] = c;
  std::sort(comp_order.begin(), comp_order.end(), [&](size_t a_, size_t b_) {
    const auto& ca = bp.blocks.components[a_];
    const auto& cb = bp.blocks.components[b_];
    if (ca.size() != cb.size()) return ca.size() > cb.size();
    return ca.front() < cb.front();
  });
  bp.order.reserve(static_cast<size_t>(a.dim));
  for (size_t c : comp_order)
    for (Index v : bp.blocks.components[c]) bp.order.push_back(v);
  return bp;
}

// Dense 0/1 matrix of the adjacency under an optional node reordering.
inline Matd adjacency_dense(const AdjacencyMatrix& a, const std::vector<Index>& order = {}) {
  Matd out = Matd::Zero(a.dim, a.dim);
  std::vector<Index> pos(static_cast<size_t>(a.dim));
  for (Index k = 0; k < a.dim; ++k)
    pos[static_cast<size_t>(order.empty() ? k : order[static_cast<size_t>(k)])] = k;
  for (const auto& [i, j] : a.edges) {
    const Index pi = pos[static_cast<size_t>(i)];
    const Index pj = pos[static_cast<size_t>(j)];
    out(pi, pj) = 1.0;
    out(pj, pi) = 1.0;
  }
  return out;
}

}  // namespace sparsenet
