#pragma once

// Constant-time level-ancestor and lowest-common-ancestor queries over a
// rooted forest given as a parent array (-1 marks a root).
//
// LCA: Euler tour with a sparse-table range minimum, O(n log n) build.
// Level ancestor: long-path ladders plus power-of-two jump pointers,
// O(n log n) build.

#include <bit>
#include <cstdint>
#include <vector>

namespace l1sp {

class TreeShape {
 public:
  TreeShape() = default;
  explicit TreeShape(const std::vector<int>& parent);

  int size() const { return static_cast<int>(parent_.size()); }
  int parent(int v) const { return parent_[v]; }
  /// Depth below the node's own root (roots have depth 0).
  int depth(int v) const { return depth_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  const std::vector<int>& roots() const { return roots_; }
  /// Preorder of the whole forest.
  const std::vector<int>& preorder() const { return preorder_; }

 private:
  std::vector<int> parent_;
  std::vector<int> depth_;
  std::vector<std::vector<int>> children_;
  std::vector<int> roots_;
  std::vector<int> preorder_;
};

class LcaIndex {
 public:
  LcaIndex() = default;
  explicit LcaIndex(const TreeShape& tree);

  /// Deepest common ancestor, or -1 when u and v lie in different trees.
  int lca(int u, int v) const;

  /// Euler position of v, and the packed minimum (depth + 1) << 32 |
  /// (node + 1) over positions i..j, i <= j.
  int first(int v) const { return first_[v]; }
  std::uint64_t range_min(int i, int j) const;

  std::size_t memory_entries() const;

 private:
  // Euler tour of the forest under a virtual super-root. Table entries pack
  // (depth + 1) << 32 | (node + 1), so the minimum key is the shallowest
  // node of a range; one row per power of two, stored back to back.
  std::vector<int> first_;
  std::vector<std::uint64_t> table_;
  std::vector<std::size_t> row_;
};

class LaIndex {
 public:
  LaIndex() = default;
  explicit LaIndex(const TreeShape& tree);

  /// Ancestor of v at depth l, 0 <= l <= depth(v). Throws DepthOutOfRange.
  int level_ancestor(int v, int l) const;

  /// Position in ladder() of v's ancestor at depth l < dv = depth(v).
  /// Unchecked.
  int ladder_pos(int v, int dv, int l) const {
    const int d = dv - l;
    const int k = std::bit_width(static_cast<unsigned>(d)) - 1;
    return jump_[static_cast<std::size_t>(k) * n_ + v] - (d - (1 << k));
  }
  const std::vector<int>& ladder() const { return ladder_; }

 private:
  // Long-path ladders, each extended upward by its length, concatenated
  // top to bottom into ladder_. A jump entry holds the position, inside
  // ladder_, of the 2^k-th ancestor on that ancestor's own ladder.
  int n_ = 0;
  std::vector<int> depth_;
  std::vector<int> jump_;  // jump_[k * n_ + v], -1 past the root
  std::vector<int> ladder_;
};

}  // namespace l1sp
