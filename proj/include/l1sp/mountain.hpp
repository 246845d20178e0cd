#pragma once

// Mountain decomposition of a simple polygon with respect to a horizontal
// chord e, with the per-cell annotations used by the query structures.
//
// Each cell keeps a quarter-turn rotation `rot` such that
// rotate_quarter(world, rot) is its canonical frame, where the cell is an
// upward mountain: boundary edge 0 is the base, horizontal, traversed left
// to right with the cell above it. Side 1 (above e) uses rot 0, side 2
// (below e) rot 2; a child is rotated one quarter turn further than its
// parent, so bases alternate between horizontal and vertical.

#include <cstdint>
#include <optional>
#include <vector>

#include "l1sp/geometry.hpp"
#include "l1sp/trapezoid.hpp"
#include "l1sp/tree_index.hpp"

namespace l1sp {

/// A point on a cell base with the trapezoid of the parent cell's
/// decomposition that contains it.
struct AssocPoint {
  Point p;  // world
  int trap = -1;
};

struct MountainCell {
  int id = -1;
  int side = 1;  // 1 above e, 2 below
  int rot = 0;
  int parent = -1;
  int depth = 0;
  std::vector<int> children;

  std::vector<Point> boundary;  // world, CCW; edge 0 is the base
  std::vector<int> vertex_ids;  // polygon vertex per boundary vertex, or -1
  int window_edge = -1;         // index of our base among the parent's edges
  bool left_wing = false;       // boundary edge size-1
  bool right_wing = false;      // boundary edge 1

  Point anchor;  // a_C
  int anchor_vertex = -1;
  Point tau;  // parent point on the parent's base (non-roots)
  Point eps;  // L1-projection on e
  long double dist_tau_eps = 0;

  TrapDecomposition trap;  // D_C on the canonical boundary, extensions // base
  TrapCellTree trap_tree;
  LcaIndex trap_lca;

  std::vector<AssocPoint> assoc;  // A_C, sorted along the base
  int tau_slot = -1;              // our tau inside the parent's A_C

  Segment base() const { return {boundary[0], boundary[1]}; }
  Point to_canon(Point w) const { return rotate_quarter(w, rot); }
  Point to_world(Point c) const { return rotate_quarter(c, 4 - rot); }
  /// Canonical boundary (the region of D_C).
  const std::vector<Point>& canon() const { return trap.region(); }
};

struct VertexAssoc {
  int cell = -1;
  int trap = -1;
  int alt_cell = -1;  // other side's root for a vertex on e
  int alt_trap = -1;
  int proj_slot = -1;  // projection on the own base, inside the cell's A_C
};

/// Maximal horizontal chord of the polygon through a point, with the
/// points where the polygon boundary meets it.
struct Chord {
  Segment seg;  // seg.a left of seg.b
};

/// Median-vertex chord used by the two-point structure.
Chord choose_chord(const Polygon& poly);

/// Maximal horizontal chord through s, or nullopt when it degenerates to
/// the single point s. Throws PointOutsidePolygon.
std::optional<Chord> chord_through(const Polygon& poly, Point s);

class MountainForest {
 public:
  MountainForest() = default;

  /// With `source`, root anchors are the source clamped onto each root base
  /// (single-source map); otherwise they are the left base endpoints.
  static MountainForest build(const Polygon& poly, const Chord& chord,
                              std::optional<Point> source = std::nullopt);

  const Polygon& polygon() const { return poly_; }
  const Chord& chord() const { return chord_; }
  const std::vector<MountainCell>& cells() const { return cells_; }
  const MountainCell& cell(int id) const { return cells_[id]; }
  std::size_t size() const { return cells_.size(); }
  const std::vector<int>& roots(int side) const { return roots_[side - 1]; }
  const VertexAssoc& vertex(std::size_t i) const { return vertex_[i]; }

  const TreeShape& tree() const { return tree_; }
  int level_ancestor(int c, int depth) const {
    return la_.level_ancestor(c, depth);
  }
  int lca(int a, int b) const { return lca_.lca(a, b); }
  const LaIndex& la_index() const { return la_; }
  const LcaIndex& lca_index() const { return lca_; }

  /// True when p lies on the chord e.
  bool on_chord(Point p) const;

  /// Projection of p (in the cell) on the cell's own base: vertical drop in
  /// the canonical frame, clamped to the nearer base endpoint over a wing.
  Point project_to_base(int c, Point p) const;

  /// Shallowest-depth trapezoid of D_C containing the world point p,
  /// starting from a known containing trapezoid.
  int settle_trap(int c, int start, Point p) const;

  /// Trapezoid of D_C along boundary edge `edge` containing world point p.
  int trap_on_boundary(int c, int edge, Point p) const;

  /// Trapezoid of D_C containing p, by linear scan.
  int trap_scan(int c, Point p) const;

  /// Canonical path inside cell c from p down to the bottom and along it to
  /// q on the base (world coordinates). L1-tight.
  Polyline canonical_path(int c, Point p, Point q) const;

  /// In-cell path from p to q through the lowest level h (canonical y):
  /// vertical drops to max(h, bottom) and a walk along that profile.
  Polyline profile_path(int c, Point p, Point q, double h) const;

  /// Definition-1 L1-projection of t in cell c0 on the base of ancestor c.
  Point l1_projection(int c0, int c, Point t) const;

  /// Sum of cells, trapezoids and A-chain entries.
  std::size_t stored_size() const;

  const std::optional<Point>& source() const { return source_; }

  /// Rebuilds D_C, the trapezoid trees and the tree indexes from stored
  /// cells (boundary, parent, rot, annotations). Snapshot loading.
  static MountainForest assemble(Polygon poly, Chord chord,
                                 std::optional<Point> source,
                                 std::vector<MountainCell> cells,
                                 std::vector<VertexAssoc> vertex);

 private:
  Polygon poly_;
  Chord chord_;
  std::optional<Point> source_;
  std::vector<MountainCell> cells_;
  std::vector<int> roots_[2];
  std::vector<VertexAssoc> vertex_;
  TreeShape tree_;
  LaIndex la_;
  LcaIndex lca_;

  friend class ForestBuilder;
};

}  // namespace l1sp
