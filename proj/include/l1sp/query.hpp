#pragma once

// Two-point L1 shortest-path queries in a simple polygon.
//
// Build: mountain decomposition on both sides of a median horizontal chord
// e, level-ancestor and LCA indexes over the cell trees, trapezoid trees
// per cell, and a point locator. Queries between arbitrary points cost
// O(log n) (two point locations); queries between polygon vertices or
// registered points cost O(1) and never touch the locator.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "l1sp/geometry.hpp"
#include "l1sp/locator.hpp"
#include "l1sp/mountain.hpp"

namespace l1sp {

struct PointHash {
  std::size_t operator()(Point p) const noexcept;
};

/// A query point with its cell and trapezoid. Points on e keep the cell the
/// locator reported; the pair rule moves them to a common side. For points
/// in a non-root cell, `proj` is the projection on the cell's base and
/// `proj_trap` the parent trapezoid holding it.
struct Located {
  Point p;
  int cell = -1;
  int trap = -1;
  int vertex = -1;
  bool on_e = false;
  bool has_proj = false;
  Point proj;
  int proj_trap = -1;
};

/// Points located once against an engine. Immutable.
class RegisteredSet {
 public:
  std::size_t size() const { return locs_.size(); }
  const Located& operator[](std::size_t i) const { return locs_[i]; }
  Point point(std::size_t i) const { return locs_[i].p; }

 private:
  std::vector<Located> locs_;
  friend class QueryEngine;
};

class QueryEngine {
 public:
  QueryEngine() = default;
  explicit QueryEngine(const Polygon& poly,
                       std::uint64_t locator_seed = PointLocator::kDefaultSeed);
  /// From a prebuilt (or loaded) forest; the locator is rebuilt.
  QueryEngine(MountainForest forest, std::uint64_t locator_seed);

  /// Cell and trapezoid of p; a point on a window goes to the parent.
  /// Throws PointOutsidePolygon.
  LocatorHit locate(Point p) const;
  /// Precomputed association, no point location.
  LocatorHit locate_vertex(std::size_t i) const;

  /// Projection t_b of t (in cell c0) on the base of ancestor c and d(t, t_b).
  /// Throws NotAncestor, PointNotInCell.
  std::pair<Point, double> path_to_base(int c0, int c, Point t) const;
  Polyline emit_path_to_base(int c0, int c, Point t) const;

  double query_distance(Point s, Point t) const;
  Polyline query_path(Point s, Point t) const;

  /// Polygon vertices by index. Throws IndexOutOfRange.
  double query_vertices(std::size_t i, std::size_t j) const;
  Polyline query_vertex_path(std::size_t i, std::size_t j) const;

  /// Locates the points once. Queries between registered points do no
  /// point location. Throws PointOutsidePolygon.
  RegisteredSet register_points(const std::vector<Point>& pts) const;
  double query_registered(const RegisteredSet& set, std::size_t i,
                          std::size_t j) const;
  Polyline query_registered_path(const RegisteredSet& set, std::size_t i,
                                 std::size_t j) const;

  const Polygon& polygon() const { return forest_.polygon(); }
  const MountainForest& forest() const { return forest_; }
  const PointLocator& locator() const { return locator_; }
  std::uint64_t locator_seed() const { return locator_.seed(); }

 private:
  using Loc = Located;
  struct Lift {
    Point p;
    long double d;
    int trap;
  };

  // Query-time copy of the per-cell data the distance formulas read, one
  // cache line per cell.
  struct HotCell {
    Point tau;
    long double dte = 0;
    int parent = -1;
    int depth = 0;
    int side = 1;
    int rot = 0;
    int tau_trap = -1;  // trapezoid of tau in the grandparent's decomposition
    int trap_base = 0;  // first global trapezoid id of the cell
  };

  // Everything a vertex-to-vertex distance reads about one endpoint, in one
  // cache line. lpos is -1 for vertices on e, which take the general path.
  struct alignas(64) VertexHot {
    Point proj;            // projection on the cell's base
    long double dp = 0;    // |p proj|
    long double up = 0;    // |p proj| + |proj tau| + dte of the cell
    int lpos = -1;         // the cell's entry in the ladder with most room above
    int proj_trap = -1;
    int euler = 0;         // position in the cell tree's Euler tour
    int depth = 0;
  };
  // Per entry of the level-ancestor ladder, the cell data lift() needs and
  // enough to tell whether it is a given cell's ancestor.
  struct alignas(64) AncHot {
    Point tau;
    long double dte = 0;
    int tau_trap = -1;
    int depth = 0;
    int euler = 0, euler_end = 0;  // the cell's subtree in the Euler tour
  };

  MountainForest forest_;
  PointLocator locator_;
  std::vector<HotCell> hot_;
  std::vector<Located> vloc_;
  std::vector<VertexHot> vhot_;
  std::vector<AncHot> anc_;
  std::vector<std::pair<Point, int>> vhash_;  // open addressing, -1 = empty
  LcaIndex trap_lca_;            // every cell's trapezoid tree, global ids
  std::vector<double> trap_h_;   // extension level of each global trapezoid
  int root_[2] = {-1, -1};

  void init();
  Loc resolve(Point p) const;
  void check_chain(int c0, int c, Point t) const;
  Loc vertex_loc(std::size_t i) const;
  std::pair<Loc, Loc> pick_sides(Loc s, Loc t) const;

  int vertex_at(Point p) const;
  Point base_proj(const Loc& l) const;
  std::pair<Point, long double> to_ancestor(const Loc& l, int a) const;
  Lift lift(int c, const Loc& l) const;
  long double in_cell(int c, const Lift& a, const Lift& b) const;
  double distance(const Loc& s, const Loc& t) const;
  double vertex_distance(std::size_t i, std::size_t j) const;
  const AncHot& vertex_ancestor(const VertexHot& v, int depth) const;

  Polyline path_to_ancestor(int c0, Point p, int a) const;
  Polyline path(const Loc& s, const Loc& t) const;
};

}  // namespace l1sp
