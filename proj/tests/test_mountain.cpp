#include <gtest/gtest.h>

#include <cmath>

#include "l1sp/mountain.hpp"
#include "l1sp/oracle.hpp"

using namespace l1sp;

namespace {

MountainForest forest_for(const Polygon& p) {
  return MountainForest::build(p, choose_chord(p));
}

}  // namespace

TEST(Chord, RegularMedianVertex) {
  const Polygon q = validate_polygon({{0, 0}, {7, 1}, {6, 8}, {1, 6}});
  const Chord c = choose_chord(q);
  EXPECT_EQ(c.seg.a, (Point{1, 6}));
  EXPECT_DOUBLE_EQ(c.seg.b.x, 7.0 - 5.0 / 7.0);
  EXPECT_EQ(c.seg.b.y, 6.0);
}

TEST(Chord, ThroughConvexTipIsDegenerate) {
  const Polygon q = validate_polygon({{0, 0}, {7, 1}, {6, 8}, {1, 6}});
  EXPECT_FALSE(chord_through(q, {6, 8}).has_value());
  EXPECT_TRUE(chord_through(q, {3, 3}).has_value());
  EXPECT_THROW(chord_through(q, {9, 9}), GeometryError);
}

TEST(Chord, GrazingReflexVertexSplitsASide) {
  // The notch tip (5, 3) grazes the chord through y = 3 from above.
  const Polygon n = validate_polygon(
      {{0, 0}, {10, 1}, {9, 9}, {6, 8.5}, {5, 3}, {4, 7}, {1, 10}});
  const auto c = chord_through(n, {2, 3});
  ASSERT_TRUE(c.has_value());
  const MountainForest f = MountainForest::build(n, *c, Point{2, 3});
  EXPECT_EQ(f.roots(1).size(), 2u);
  EXPECT_EQ(f.roots(2).size(), 1u);
}

TEST(Mountain, StructureInvariants) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 5 + seed % 56;
    const Polygon p = generate_polygon(n, seed);
    const MountainForest f = forest_for(p);
    ASSERT_LE(f.size(), 2 * n) << seed;

    double area = 0;
    for (const MountainCell& c : f.cells()) area += signed_area(c.boundary);
    EXPECT_NEAR(area, p.area(), 1e-9 * p.area()) << seed;

    for (const MountainCell& c : f.cells()) {
      const Segment b = c.base();
      if (c.parent < 0) {
        EXPECT_TRUE(b.horizontal());
        continue;
      }
      const Segment pb = f.cell(c.parent).base();
      EXPECT_TRUE((b.vertical() && pb.horizontal()) ||
                  (b.horizontal() && pb.vertical()))
          << seed << " cell " << c.id;
      bool owns = false;
      for (std::size_t i = 2; i < c.vertex_ids.size(); ++i)
        owns |= c.vertex_ids[i] >= 0;
      EXPECT_TRUE(owns) << seed << " cell " << c.id;
    }
  }
}

TEST(Mountain, RandomPointsLandInOneCell) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Polygon p = generate_polygon(40, seed);
    const MountainForest f = forest_for(p);
    std::uint64_t state = seed * 7919;
    for (int k = 0; k < 1000; ++k) {
      const Point q = random_interior_point(p, state, false);
      int hits = 0;
      for (const MountainCell& c : f.cells())
        hits += point_in_polygon(c.boundary, q) ? 1 : 0;
      EXPECT_EQ(hits, 1) << seed;
    }
  }
}

TEST(Mountain, ParentPointChainMatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Polygon p = generate_polygon(50, seed);
    const MountainForest f = forest_for(p);
    const VisibilityOracle o(p);
    for (const MountainCell& c : f.cells()) {
      if (c.parent < 0) continue;
      EXPECT_TRUE(f.on_chord(c.eps));
      EXPECT_NEAR(static_cast<double>(c.dist_tau_eps), o.distance(c.tau, c.eps),
                  1e-9 * p.bbox_diagonal())
          << seed << " cell " << c.id;
    }
  }
}

TEST(Mountain, EveryVertexHasACell) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Polygon p = generate_polygon(45, seed);
    const MountainForest f = forest_for(p);
    for (std::size_t v = 0; v < p.size(); ++v) {
      const VertexAssoc& a = f.vertex(v);
      ASSERT_GE(a.cell, 0);
      const MountainCell& c = f.cell(a.cell);
      EXPECT_TRUE(c.trap.contains(a.trap, c.to_canon(p[v])));
      if (c.parent >= 0)
        EXPECT_EQ(c.assoc[a.proj_slot].p, f.project_to_base(a.cell, p[v]));
    }
    for (const MountainCell& c : f.cells())
      if (c.tau_slot >= 0) {
        const MountainCell& par = f.cell(c.parent);
        EXPECT_EQ(par.assoc[c.tau_slot].p, c.tau);
        const MountainCell& gp = f.cell(par.parent);
        EXPECT_TRUE(gp.trap.contains(par.assoc[c.tau_slot].trap, gp.to_canon(c.tau)));
      }
  }
}

TEST(Mountain, CanonicalPathIsTight) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Polygon p = generate_polygon(30, seed);
    const MountainForest f = forest_for(p);
    std::uint64_t state = seed;
    const double tol = 1e-9 * p.bbox_diagonal();
    for (int k = 0; k < 300; ++k) {
      const Point q = random_interior_point(p, state, false);
      int c = -1;
      for (const MountainCell& cell : f.cells())
        if (point_in_polygon(cell.boundary, q)) c = cell.id;
      ASSERT_GE(c, 0);
      const Segment b = f.cell(c).base();
      const double u = static_cast<double>(splitmix64(state) % 1000) / 1000.0;
      Point t{b.a.x + u * (b.b.x - b.a.x), b.a.y + u * (b.b.y - b.a.y)};
      if (b.horizontal()) t.y = b.a.y; else t.x = b.a.x;
      const Polyline path = f.canonical_path(c, q, t);
      EXPECT_NEAR(l1_length(path), l1_norm(q, t), tol);
      const auto& pts = path.points();
      for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        EXPECT_TRUE(segment_in_polygon({pts[i], pts[i + 1]}, p, tol));
    }
  }
}

TEST(Mountain, CanonicalPathRejectsBadInput) {
  const Polygon p = generate_polygon(20, 3);
  const MountainForest f = forest_for(p);
  const MountainCell& r = f.cell(f.roots(1).front());
  const Point mid = {(r.boundary[0].x + r.boundary[1].x) / 2, r.boundary[0].y};
  EXPECT_THROW(f.canonical_path(r.id, mid, {mid.x, mid.y + 1}), GeometryError);
  EXPECT_THROW(f.canonical_path(r.id, {-1e9, -1e9}, mid), GeometryError);
}

TEST(Mountain, StoredSizeIsLinear) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Polygon p = generate_polygon(60, seed);
    EXPECT_LE(forest_for(p).stored_size(), 12 * p.size());
  }
}
