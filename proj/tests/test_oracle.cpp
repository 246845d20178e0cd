#include <gtest/gtest.h>

#include "l1sp/oracle.hpp"

using namespace l1sp;

TEST(Oracle, SamePointIsZero) {
  const Polygon p = generate_polygon(20, 4);
  VisibilityOracle o(p);
  EXPECT_EQ(o.distance(p[3], p[3]), 0.0);
}

TEST(Oracle, ConvexIsL1Norm) {
  const Polygon q = validate_polygon({{0, 0}, {7, 1}, {6, 8}, {1, 6}});
  EXPECT_EQ(oracle_distance(q, {0, 0}, {6, 8}), 14.0);
  EXPECT_EQ(oracle_distance(q, {1, 6}, {7, 1}), 11.0);
}

TEST(Oracle, LShapeWithoutGeneralPosition) {
  const Polygon l = Polygon::from_trusted(
      {{0, 0}, {4, 0}, {4, 1}, {1, 1}, {1, 4}, {0, 4}});
  EXPECT_EQ(oracle_distance(l, {4, 0}, {0, 4}), 8.0);
  const Polyline path = VisibilityOracle(l).path({4, 1}, {1, 4});
  EXPECT_EQ(l1_length(path), 6.0);
}

TEST(Oracle, NotchForcesDetour) {
  // Deep notch from the top; going around its tip costs extra height.
  const Polygon n = validate_polygon(
      {{0, 0}, {10, 1}, {9, 9}, {6, 8.5}, {5, 3}, {4, 7}, {1, 10}});
  EXPECT_EQ(oracle_distance(n, {2, 8}, {8, 8}), 6.0 + 2 * 5.0);
}

TEST(Oracle, RejectsOutsidePoints) {
  const Polygon q = validate_polygon({{0, 0}, {7, 1}, {6, 8}, {1, 6}});
  EXPECT_THROW(oracle_distance(q, {0, 0}, {9, 9}), GeometryError);
}

TEST(Oracle, MetricAndPathProperties) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Polygon p = generate_polygon(25, seed);
    VisibilityOracle o(p);
    std::uint64_t st = seed;
    std::vector<Point> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(random_interior_point(p, st, true));
    for (const Point& a : pts)
      for (const Point& b : pts) {
        const double d = o.distance(a, b);
        EXPECT_EQ(d, o.distance(b, a));
        EXPECT_GE(d, l1_norm(a, b));
        if (o.visible(a, b)) EXPECT_EQ(d, l1_norm(a, b));
        const Polyline path = o.path(a, b);
        EXPECT_EQ(l1_length(path), d);
        for (std::size_t k = 0; k + 1 < path.size(); ++k)
          EXPECT_TRUE(segment_in_polygon({path.points()[k], path.points()[k + 1]}, p));
        for (const Point& c : pts)
          EXPECT_LE(d, o.distance(a, c) + o.distance(c, b));
      }
    for (std::size_t i = 0; i < p.size(); ++i)
      EXPECT_EQ(o.vertex_distance(0, i), o.distance(p[0], p[i]));
  }
}

TEST(Generator, Deterministic) {
  const Polygon a = generate_polygon(30, 99), b = generate_polygon(30, 99);
  EXPECT_EQ(a.vertices(), b.vertices());
  EXPECT_NE(a.vertices(), generate_polygon(30, 100).vertices());
}

TEST(Generator, TriangleAndValidity) {
  EXPECT_EQ(generate_polygon(3, 1).size(), 3u);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Polygon p = generate_polygon(60, seed);
    EXPECT_EQ(p.size(), 60u);
    EXPECT_NO_THROW(validate_polygon(p.vertices()));
  }
}

TEST(Generator, SweepAndQuadraticConflictChecksAgree) {
  std::uint64_t st = 17;
  for (int it = 0; it < 300; ++it) {
    const std::size_t n = 4 + splitmix64(st) % 40;
    std::vector<Point> ring;
    for (std::size_t i = 0; i < n; ++i)
      ring.push_back({double(splitmix64(st) % 50), double(splitmix64(st) % 50)});
    EXPECT_EQ(find_boundary_conflict(ring, true).has_value(),
              find_boundary_conflict(ring, false).has_value());
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Polygon p = generate_polygon(40, seed);
    EXPECT_FALSE(find_boundary_conflict(p.vertices(), true));
  }
}

TEST(Generator, LargeStarPolygon) {
  const Polygon p = generate_star_polygon(20000, 3);
  EXPECT_EQ(p.size(), 20000u);
  EXPECT_FALSE(find_boundary_conflict(p.vertices(), true));
}
