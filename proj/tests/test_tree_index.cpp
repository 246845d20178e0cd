#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "l1sp/geometry.hpp"
#include "l1sp/tree_index.hpp"

using namespace l1sp;

namespace {

int naive_la(const std::vector<int>& parent, const TreeShape& t, int v, int l) {
  while (t.depth(v) > l) v = parent[v];
  return v;
}

int naive_lca(const std::vector<int>& parent, const TreeShape& t, int u,
              int v) {
  while (u >= 0 && v >= 0 && u != v) {
    if (t.depth(u) >= t.depth(v))
      u = parent[u];
    else
      v = parent[v];
  }
  return u == v ? u : -1;
}

void check_all(const std::vector<int>& parent) {
  const TreeShape t(parent);
  const LaIndex la(t);
  const LcaIndex lca(t);
  const int n = t.size();
  for (int v = 0; v < n; ++v) {
    for (int l = 0; l <= t.depth(v); ++l) {
      const int a = la.level_ancestor(v, l);
      ASSERT_EQ(a, naive_la(parent, t, v, l));
      ASSERT_EQ(lca.lca(v, a), a);
    }
    for (int u = 0; u < n; ++u) ASSERT_EQ(lca.lca(u, v), naive_lca(parent, t, u, v));
  }
}

// All rooted ordered trees with n nodes as parent arrays in preorder, where
// node i's parent is some node on the rightmost path of nodes 0..i-1.
void enumerate(int n, std::vector<int>& parent, std::vector<int>& path,
               const std::function<void(const std::vector<int>&)>& f) {
  const int i = static_cast<int>(parent.size());
  if (i == n) {
    f(parent);
    return;
  }
  const std::vector<int> saved = path;
  for (std::size_t k = 0; k < saved.size(); ++k) {
    parent.push_back(saved[k]);
    path.assign(saved.begin(), saved.begin() + k + 1);
    path.push_back(i);
    enumerate(n, parent, path, f);
    parent.pop_back();
  }
  path = saved;
}

}  // namespace

TEST(TreeIndex, PathTree) {
  const TreeShape t({-1, 0, 1, 2});
  const LaIndex la(t);
  EXPECT_EQ(la.level_ancestor(3, 1), 1);
  EXPECT_EQ(la.level_ancestor(3, 3), 3);
  EXPECT_THROW(la.level_ancestor(3, 4), GeometryError);
  EXPECT_THROW(la.level_ancestor(3, -1), GeometryError);
}

TEST(TreeIndex, SiblingsAndAncestors) {
  const TreeShape t({-1, 0, 0, 1});
  const LcaIndex lca(t);
  EXPECT_EQ(lca.lca(1, 2), 0);
  EXPECT_EQ(lca.lca(3, 1), 1);
  EXPECT_EQ(lca.lca(2, 2), 2);
}

TEST(TreeIndex, ForestHasNoCommonAncestor) {
  const TreeShape t({-1, 0, -1, 2});
  const LcaIndex lca(t);
  EXPECT_EQ(lca.lca(1, 3), -1);
  EXPECT_EQ(lca.lca(1, 0), 0);
  EXPECT_EQ(LaIndex(t).level_ancestor(3, 0), 2);
}

TEST(TreeIndex, ExhaustiveSmallTrees) {
  std::size_t count = 0;
  for (int n = 1; n <= 12; ++n) {
    std::vector<int> parent{-1}, path{0};
    enumerate(n, parent, path, [&](const std::vector<int>& p) {
      check_all(p);
      ++count;
    });
  }
  // Catalan numbers C(0..11) summed.
  EXPECT_EQ(count, 1u + 1 + 2 + 5 + 14 + 42 + 132 + 429 + 1430 + 4862 +
                       16796 + 58786);
}

TEST(TreeIndex, RandomTrees) {
  std::mt19937 rng(11);
  for (int it = 0; it < 500; ++it) {
    const int n = 1 + static_cast<int>(rng() % 300);
    std::vector<int> parent(n, -1);
    const int shape = it % 3;
    for (int v = 1; v < n; ++v) {
      if (shape == 0)
        parent[v] = static_cast<int>(rng() % v);
      else if (shape == 1)
        parent[v] = std::max(0, v - 1 - static_cast<int>(rng() % 3));
      else
        parent[v] = (v - 1) / 2;
    }
    check_all(parent);
  }
}
