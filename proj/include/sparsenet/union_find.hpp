#pragma once

#include <numeric>
#include <vector>

#include "sparsenet/types.hpp"

namespace sparsenet {

// Disjoint sets with path compression and union by rank.
class UnionFind {
 public:
  explicit UnionFind(Index n)
      : parent_(static_cast<size_t>(n)), rank_(static_cast<size_t>(n), 0), components_(n) {
    std::iota(parent_.begin(), parent_.end(), Index(0));
  }

  Index find(Index x) {
    Index root = x;
    while (parent_[static_cast<size_t>(root)] != root) root = parent_[static_cast<size_t>(root)];
    while (parent_[static_cast<size_t>(x)] != root) {
      Index next = parent_[static_cast<size_t>(x)];
      parent_[static_cast<size_t>(x)] = root;
      x = next;
    }
    return root;
  }

  // Returns true when x and y were in different components.
  bool unite(Index x, Index y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (rank_[static_cast<size_t>(x)] < rank_[static_cast<size_t>(y)]) std::swap(x, y);
    parent_[static_cast<size_t>(y)] = x;
    if (rank_[static_cast<size_t>(x)] == rank_[static_cast<size_t>(y)])
      ++rank_[static_cast<size_t>(x)];
    --components_;
    return true;
  }

  bool same(Index x, Index y) { return find(x) == find(y); }
  Index count() const { return components_; }
  Index size() const { return static_cast<Index>(parent_.size()); }

 private:
  std::vector<Index> parent_;
  std::vector<int> rank_;
  Index components_;
};

}  // namespace sparsenet
