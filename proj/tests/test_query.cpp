#include <gtest/gtest.h>

#include "l1sp/oracle.hpp"
#include "l1sp/query.hpp"

using namespace l1sp;

namespace {

void expect_valid_path(const Polygon& poly, const Polyline& path, Point s,
                       Point t, double d) {
  const double tol = 1e-9 * poly.bbox_diagonal();
  ASSERT_FALSE(path.empty());
  EXPECT_EQ(path.front(), s);
  EXPECT_EQ(path.back(), t);
  EXPECT_NEAR(l1_length(path), d, tol);
  const auto& pts = path.points();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    EXPECT_TRUE(segment_in_polygon({pts[i], pts[i + 1]}, poly, tol))
        << "segment " << i << " (" << pts[i].x << "," << pts[i].y << ")-("
        << pts[i + 1].x << "," << pts[i + 1].y << ")";
}

}  // namespace

TEST(Query, ConvexQuad) {
  const Polygon q = validate_polygon({{0, 0}, {7, 1}, {6, 8}, {1, 6}});
  const QueryEngine e(q);
  EXPECT_EQ(e.query_vertices(0, 2), 14.0);
  EXPECT_EQ(e.query_distance({1, 6}, {7, 1}), 11.0);
  EXPECT_EQ(e.query_distance({3, 3}, {3, 3}), 0.0);
  EXPECT_THROW(e.query_distance({-1, 0}, {3, 3}), GeometryError);
  EXPECT_THROW(e.query_vertices(0, 4), GeometryError);
}

TEST(Query, NotchDetour) {
  const Polygon n = validate_polygon(
      {{0, 0}, {10, 1}, {9, 9}, {6, 8.5}, {5, 3}, {4, 7}, {1, 10}});
  const QueryEngine e(n);
  EXPECT_EQ(e.query_distance({2, 8}, {8, 8}), 16.0);
  const Polyline p = e.query_path({2, 8}, {8, 8});
  expect_valid_path(n, p, {2, 8}, {8, 8}, 16.0);
}

TEST(Query, VertexPairsMatchOracle) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Polygon p = generate_polygon(5 + seed % 40, seed);
    const QueryEngine e(p);
    const VisibilityOracle o(p);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < p.size(); ++j)
        ASSERT_EQ(e.query_vertices(i, j), o.vertex_distance(i, j))
            << "seed " << seed << " pair " << i << " " << j;
  }
}

TEST(Query, VertexIndexesMatchVertexPoints) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::vector<Point> v = generate_polygon(10 + 3 * seed, seed).vertices();
    for (Point& q : v) q = {q.x * 0.37 + 0.1, q.y * 0.53 - 0.2};
    const Polygon p = validate_polygon(v);
    const QueryEngine e(p);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < p.size(); ++j)
        ASSERT_EQ(e.query_vertices(i, j), e.query_distance(p[i], p[j]))
            << "seed " << seed << " pair " << i << " " << j;
  }
}

TEST(Query, ArbitraryPointsMatchOracle) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Polygon p = generate_polygon(8 + seed % 30, seed);
    const QueryEngine e(p);
    const VisibilityOracle o(p);
    std::uint64_t state = seed * 31;
    for (int k = 0; k < 40; ++k) {
      const bool lattice = k % 2 == 0;
      const Point s = random_interior_point(p, state, lattice);
      const Point t = random_interior_point(p, state, lattice);
      const double want = o.distance(s, t);
      const double got = e.query_distance(s, t);
      if (lattice)
        ASSERT_EQ(got, want) << seed << " " << k;
      else
        ASSERT_NEAR(got, want, 1e-9 * std::max(1.0, want)) << seed << " " << k;
    }
  }
}

TEST(Query, PathsAreValidAndTight) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Polygon p = generate_polygon(10 + seed % 25, seed);
    const QueryEngine e(p);
    std::uint64_t state = seed * 77;
    for (int k = 0; k < 20; ++k) {
      const Point s = random_interior_point(p, state, true);
      const Point t = random_interior_point(p, state, true);
      const double d = e.query_distance(s, t);
      const Polyline path = e.query_path(s, t);
      expect_valid_path(p, path, s, t, d);
      EXPECT_EQ(l1_length(path), d) << seed << " " << k;
    }
    for (std::size_t i = 0; i < p.size(); i += 3)
      for (std::size_t j = 0; j < p.size(); j += 2) {
        const Polyline path = e.query_vertex_path(i, j);
        expect_valid_path(p, path, p[i], p[j], e.query_vertices(i, j));
      }
  }
}

TEST(Query, PointsOnChordAndWindows) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Polygon p = generate_polygon(30, seed);
    const QueryEngine e(p);
    const VisibilityOracle o(p);
    const double tol = 1e-9 * p.bbox_diagonal();
    std::vector<Point> special;
    for (const MountainCell& c : e.forest().cells()) {
      const Segment b = c.base();
      special.push_back({(b.a.x + b.b.x) / 2, (b.a.y + b.b.y) / 2});
    }
    std::uint64_t state = seed;
    for (const Point& s : special) {
      const Point t = random_interior_point(p, state, false);
      EXPECT_NEAR(e.query_distance(s, t), o.distance(s, t), tol) << seed;
      EXPECT_NEAR(e.query_distance(t, s), o.distance(s, t), tol) << seed;
      const Point u = special[splitmix64(state) % special.size()];
      EXPECT_NEAR(e.query_distance(s, u), o.distance(s, u), tol) << seed;
    }
  }
}

TEST(Query, RegisteredPointsSkipLocator) {
  const Polygon p = generate_polygon(40, 6);
  const QueryEngine e(p);
  std::uint64_t state = 3;
  std::vector<Point> pts(p.vertices());
  for (int k = 0; k < 30; ++k) pts.push_back(random_interior_point(p, state, false));
  const RegisteredSet set = e.register_points(pts);
  ASSERT_EQ(set.size(), pts.size());
  const auto before = locator_ops().load();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); j += 3) {
      const double d = e.query_registered(set, i, j);
      if (i < p.size() && j < p.size()) EXPECT_EQ(d, e.query_vertices(i, j));
      EXPECT_NEAR(l1_length(e.query_registered_path(set, i, j)), d,
                  1e-9 * p.bbox_diagonal());
    }
  for (std::size_t i = 0; i < p.size(); ++i) e.query_vertices(0, i);
  EXPECT_EQ(locator_ops().load(), before);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); j += 3)
      EXPECT_EQ(e.query_registered(set, i, j), e.query_distance(pts[i], pts[j]));
  EXPECT_THROW(e.query_registered(set, 0, pts.size()), GeometryError);
}

TEST(Query, LocateMatchesVertexAssociation) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Polygon p = generate_polygon(35, seed);
    const QueryEngine e(p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const LocatorHit a = e.locate_vertex(i), b = e.locate(p[i]);
      EXPECT_EQ(a.cell, b.cell) << seed << " " << i;
      EXPECT_EQ(a.trap, b.trap) << seed << " " << i;
    }
    EXPECT_THROW(e.locate({-1, -1}), GeometryError);
  }
}

TEST(Query, PathToBaseMatchesChainAndOracle) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Polygon p = generate_polygon(40, seed);
    const QueryEngine e(p);
    const VisibilityOracle o(p);
    const MountainForest& f = e.forest();
    const double tol = 1e-9 * p.bbox_diagonal();
    std::uint64_t state = seed * 7;
    for (int k = 0; k < 40; ++k) {
      const Point t = random_interior_point(p, state, true);
      const LocatorHit h = e.locate(t);
      for (int c = h.cell; c >= 0; c = f.cell(c).parent) {
        const auto [tb, d] = e.path_to_base(h.cell, c, t);
        const Polyline path = e.emit_path_to_base(h.cell, c, t);
        EXPECT_EQ(path.front(), t);
        EXPECT_EQ(path.back(), tb);
        EXPECT_EQ(l1_length(path), d) << seed << " " << k;
        EXPECT_NEAR(o.distance(t, tb), d, tol) << seed << " " << k;
        const auto& pts = path.points();
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
          EXPECT_TRUE(segment_in_polygon({pts[i], pts[i + 1]}, p, tol));
        if (c == h.cell) EXPECT_LE(pts.size(), 4u);
        if (c == f.cell(h.cell).parent) EXPECT_EQ(tb, f.cell(h.cell).tau);
      }
    }
  }
}

TEST(Query, PathToBaseErrors) {
  const Polygon p = generate_polygon(40, 3);
  const QueryEngine e(p);
  const MountainForest& f = e.forest();
  for (const MountainCell& c : f.cells()) {
    if (c.parent < 0) continue;
    const Point mid{(c.boundary[0].x + c.boundary[1].x) / 2,
                    (c.boundary[0].y + c.boundary[1].y) / 2};
    EXPECT_THROW(e.path_to_base(c.parent, c.id, mid), GeometryError);
    const int other = f.roots(c.side == 1 ? 2 : 1).front();
    EXPECT_THROW(e.path_to_base(c.id, other, mid), GeometryError);
    EXPECT_THROW(e.path_to_base(c.id, c.id, {-1e12, -1e12}), GeometryError);
  }
}
