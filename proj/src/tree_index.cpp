#include "l1sp/tree_index.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "l1sp/geometry.hpp"

namespace l1sp {

TreeShape::TreeShape(const std::vector<int>& parent) : parent_(parent) {
  const int n = size();
  depth_.assign(n, -1);
  children_.assign(n, {});
  for (int v = 0; v < n; ++v) {
    if (parent_[v] < 0)
      roots_.push_back(v);
    else
      children_[parent_[v]].push_back(v);
  }
  preorder_.reserve(n);
  std::vector<int> stack;
  for (int r : roots_) {
    depth_[r] = 0;
    stack.push_back(r);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      preorder_.push_back(v);
      for (auto it = children_[v].rbegin(); it != children_[v].rend(); ++it) {
        depth_[*it] = depth_[v] + 1;
        stack.push_back(*it);
      }
    }
  }
}

LcaIndex::LcaIndex(const TreeShape& tree) {
  const int n = tree.size();
  first_.assign(n, -1);
  std::vector<std::uint64_t> tour;
  tour.reserve(2 * n + 1);
  auto key = [&](int v) {
    const std::uint64_t d = v < 0 ? 0 : static_cast<std::uint64_t>(tree.depth(v)) + 1;
    return d << 32 | static_cast<std::uint32_t>(v + 1);
  };
  tour.push_back(key(-1));
  struct Frame {
    int v;
    std::size_t next_child;
  };
  std::vector<Frame> stack;
  for (int r : tree.roots()) {
    stack.push_back({r, 0});
    first_[r] = static_cast<int>(tour.size());
    tour.push_back(key(r));
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& ch = tree.children(f.v);
      if (f.next_child < ch.size()) {
        const int c = ch[f.next_child++];
        first_[c] = static_cast<int>(tour.size());
        tour.push_back(key(c));
        stack.push_back({c, 0});
      } else {
        stack.pop_back();
        tour.push_back(key(stack.empty() ? -1 : stack.back().v));
      }
    }
  }
  const std::size_t m = tour.size();
  const int levels = std::bit_width(m);
  std::size_t total = 0;
  for (int k = 0; k < levels; ++k) total += m - (std::size_t{1} << k) + 1;
  table_.resize(total);
  row_.resize(levels);
  std::copy(tour.begin(), tour.end(), table_.begin());
  row_[0] = 0;
  for (int k = 1; k < levels; ++k) {
    const std::size_t len = std::size_t{1} << k;
    row_[k] = row_[k - 1] + (m - len / 2 + 1);
    const std::uint64_t* prev = table_.data() + row_[k - 1];
    std::uint64_t* cur = table_.data() + row_[k];
    for (std::size_t i = 0; i + len <= m; ++i)
      cur[i] = std::min(prev[i], prev[i + len / 2]);
  }
}

std::uint64_t LcaIndex::range_min(int i, int j) const {
  const int k = std::bit_width(static_cast<unsigned>(j - i + 1)) - 1;
  const std::uint64_t* row = table_.data() + row_[k];
  return std::min(row[i], row[j - (1 << k) + 1]);
}

int LcaIndex::lca(int u, int v) const {
  int i = first_[u], j = first_[v];
  if (i > j) std::swap(i, j);
  return static_cast<int>(static_cast<std::uint32_t>(range_min(i, j))) - 1;
}

std::size_t LcaIndex::memory_entries() const { return first_.size() + table_.size(); }

LaIndex::LaIndex(const TreeShape& tree) {
  const int n = tree.size();
  n_ = n;
  depth_.resize(n);
  for (int v = 0; v < n; ++v) depth_[v] = tree.depth(v);

  int max_depth = 0;
  for (int d : depth_) max_depth = std::max(max_depth, d);
  const int levels = std::max(1, static_cast<int>(std::bit_width(
                                     static_cast<unsigned>(max_depth))));

  // Heights, processed deepest-first (reverse preorder).
  std::vector<int> height(n, 0), long_child(n, -1);
  const auto& pre = tree.preorder();
  for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
    const int v = *it;
    for (int c : tree.children(v))
      if (long_child[v] < 0 || height[c] > height[long_child[v]])
        long_child[v] = c;
    if (long_child[v] >= 0) height[v] = height[long_child[v]] + 1;
  }

  std::vector<int> pos(n, -1);  // v's own entry in ladder_
  for (int top : pre) {
    const int p = tree.parent(top);
    if (p >= 0 && long_child[p] == top) continue;  // not a path head
    std::vector<int> path;
    for (int v = top; v >= 0; v = long_child[v]) path.push_back(v);
    std::vector<int> up;
    int a = tree.parent(top);
    while (a >= 0 && up.size() < path.size()) {
      up.push_back(a);
      a = tree.parent(a);
    }
    ladder_.insert(ladder_.end(), up.rbegin(), up.rend());
    for (int v : path) {
      pos[v] = static_cast<int>(ladder_.size());
      ladder_.push_back(v);
    }
  }

  std::vector<int> anc(n);
  for (int v = 0; v < n; ++v) anc[v] = tree.parent(v);
  jump_.assign(static_cast<std::size_t>(levels) * n, -1);
  for (int k = 0; k < levels; ++k) {
    int* row = jump_.data() + static_cast<std::size_t>(k) * n;
    for (int v = 0; v < n; ++v) row[v] = anc[v] < 0 ? -1 : pos[anc[v]];
    if (k + 1 < levels) {
      std::vector<int> next(n);
      for (int v = 0; v < n; ++v) next[v] = anc[v] < 0 ? -1 : anc[anc[v]];
      anc.swap(next);
    }
  }
}

int LaIndex::level_ancestor(int v, int l) const {
  const int dv = depth_[v];
  if (l < 0 || l > dv)
    throw GeometryError(ErrorCode::depth_out_of_range,
                        "level " + std::to_string(l) + " outside [0, " +
                            std::to_string(dv) + "]");
  if (l == dv) return v;
  // The 2^k-th ancestor's ladder reaches at least 2^k further up.
  return ladder_[ladder_pos(v, dv, l)];
}

}  // namespace l1sp
