#include <gtest/gtest.h>

#include <random>

#include "l1sp/trapezoid.hpp"

using namespace l1sp;

namespace {

double total_area(const TrapDecomposition& d) {
  double a = 0;
  for (std::size_t t = 0; t < d.size(); ++t) a += d.area(static_cast<int>(t));
  return a;
}

const std::vector<Point> kNotch{{0, 0}, {10, 1}, {9, 9}, {6, 8.5},
                                {5, 3}, {4, 7},  {1, 10}};

}  // namespace

TEST(TrapDecomposition, ConvexQuadHorizontal) {
  const std::vector<Point> q{{0, 0}, {7, 1}, {6, 8}, {1, 6}};
  const auto d = TrapDecomposition::build(q, ExtensionAxis::horizontal);
  EXPECT_EQ(d.size(), 3u);
  EXPECT_NEAR(total_area(d), signed_area(q), 1e-9);
  const auto v = TrapDecomposition::build(q, ExtensionAxis::vertical);
  EXPECT_EQ(v.size(), 3u);
}

TEST(TrapDecomposition, Triangle) {
  const std::vector<Point> t{{0, 0}, {5, 1}, {2, 4}};
  const auto d = TrapDecomposition::build(t, ExtensionAxis::horizontal);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.adjacency_count(), 1u);
}

TEST(TrapDecomposition, NonconvexPartition) {
  for (auto axis : {ExtensionAxis::vertical, ExtensionAxis::horizontal}) {
    const auto d = TrapDecomposition::build(kNotch, axis);
    EXPECT_NEAR(total_area(d), signed_area(kNotch), 1e-9);
    EXPECT_EQ(d.adjacency_count() + 1, d.size());
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0, 10);
    for (int i = 0; i < 2000; ++i) {
      const Point p{u(rng), u(rng)};
      int hits = 0;
      for (std::size_t t = 0; t < d.size(); ++t)
        hits += d.contains(static_cast<int>(t), p);
      EXPECT_EQ(hits, point_in_polygon(kNotch, p) ? 1 : 0) << p.x << " " << p.y;
    }
  }
}

TEST(TrapDecomposition, RejectsZeroArea) {
  EXPECT_THROW(TrapDecomposition::build({{0, 0}, {1, 1}, {2, 2}},
                                        ExtensionAxis::vertical),
               GeometryError);
}

TEST(TrapTree, TriangleRootOnBase) {
  // Horizontal base at the bottom, horizontal extensions.
  const std::vector<Point> t{{0, 0}, {6, 0}, {2, 5}};
  const auto d = TrapDecomposition::build(t, ExtensionAxis::horizontal);
  const auto tree = build_trap_tree(d, {{0, 0}, {6, 0}});
  ASSERT_GE(tree.root, 0);
  EXPECT_EQ(tree.depth[tree.root], 0);
  EXPECT_TRUE(d.contains(tree.root, {3, 0}));
  for (std::size_t i = 0; i < d.size(); ++i)
    if (static_cast<int>(i) != tree.root) EXPECT_GE(tree.parent[i], 0);
}

TEST(TrapTree, CorridorIsPath) {
  // Zig-zag corridor, bottom horizontal base.
  const std::vector<Point> z{{-1, 0},   {3, 0},   {2.5, 3}, {5, 4},
                             {4.5, 7},  {3.5, 7.5}, {1.5, 4.5}, {-0.5, 3.5}};
  ASSERT_GT(signed_area(z), 0);
  const auto d = TrapDecomposition::build(z, ExtensionAxis::horizontal);
  const auto tree = build_trap_tree(d, {{-1, 0}, {3, 0}});
  for (const auto& ch : tree.children) EXPECT_LE(ch.size(), 1u);
}

TEST(TrapTree, BaseMustLieOnBoundary) {
  const std::vector<Point> t{{0, 0}, {6, 0}, {2, 5}};
  const auto d = TrapDecomposition::build(t, ExtensionAxis::horizontal);
  EXPECT_THROW(build_trap_tree(d, {{0, 3}, {6, 3}}), GeometryError);
}

TEST(TrapContaining, TieGoesTowardRoot) {
  const std::vector<Point> t{{0, 0}, {6, 0}, {2, 5}, {-1, 2}};
  const auto d = TrapDecomposition::build(t, ExtensionAxis::horizontal);
  const auto tree = build_trap_tree(d, {{0, 0}, {6, 0}});
  // (0.5, 2) lies on the extension from (-1, 2).
  const int id = trap_containing(d, {0.5, 2}, &tree);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d.contains(static_cast<int>(i), {0.5, 2}))
      EXPECT_LE(tree.depth[id], tree.depth[i]);
  EXPECT_THROW(trap_containing(d, {10, 10}), GeometryError);
}
