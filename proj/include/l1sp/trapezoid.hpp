#pragma once

// Axis-aligned trapezoidal decompositions of a simple region and the rooted
// adjacency tree over their trapezoids.
//
// Internally every decomposition is computed and stored in a "sweep frame"
// in which the extensions are vertical: the identity for vertical
// extensions, a quarter turn clockwise for horizontal ones. Trapezoids are
// then described by an x-range and by the region edges forming their floor
// and ceiling.

#include <cstdint>
#include <optional>
#include <vector>

#include "l1sp/geometry.hpp"

namespace l1sp {

enum class ExtensionAxis : std::uint8_t { vertical = 0, horizontal = 1 };

struct Trapezoid {
  double x_left = 0;   // sweep frame
  double x_right = 0;  // sweep frame
  int bottom_edge = -1;  // region edge index (edge i joins vertex i and i+1)
  int top_edge = -1;
  int left_vertex = -1;   // region vertex whose extension forms the left side
  int right_vertex = -1;
  std::vector<int> left_nbrs;
  std::vector<int> right_nbrs;
};

class TrapDecomposition {
 public:
  TrapDecomposition() = default;

  /// Plane sweep, O(k log k). `region` must be a simple CCW cycle.
  static TrapDecomposition build(std::vector<Point> region, ExtensionAxis axis);

  ExtensionAxis axis() const { return axis_; }
  const std::vector<Point>& region() const { return region_; }
  const std::vector<Trapezoid>& trapezoids() const { return traps_; }
  const Trapezoid& operator[](int id) const { return traps_[id]; }
  std::size_t size() const { return traps_.size(); }

  Point to_sweep(Point p) const {
    return axis_ == ExtensionAxis::vertical ? p : rotate_quarter(p, 3);
  }
  Point from_sweep(Point p) const {
    return axis_ == ExtensionAxis::vertical ? p : rotate_quarter(p, 1);
  }

  /// Region edge endpoints in the sweep frame, ordered lexicographically.
  Point edge_lo(int e) const;
  Point edge_hi(int e) const;
  /// y of region edge e at sweep abscissa x (exact at the endpoints).
  double edge_y(int e, double x) const;

  double bottom_y(int t, double x) const {
    return edge_y(traps_[t].bottom_edge, x);
  }
  double top_y(int t, double x) const { return edge_y(traps_[t].top_edge, x); }

  /// Corners (left-bottom, right-bottom, right-top, left-top) in the
  /// region's own frame.
  std::vector<Point> corners(int t) const;
  double area(int t) const;
  bool contains(int t, Point p) const;  // closed
  bool contains_sweep(int t, Point sp) const;

  /// Trapezoids touching region vertex v (those whose sides pass through it).
  const std::vector<int>& touching_vertex(int v) const { return at_vertex_[v]; }
  /// Trapezoids whose floor or ceiling lies on region edge e, by x_left.
  const std::vector<int>& along_edge(int e) const { return along_edge_[e]; }

  /// Number of adjacency pairs (counted once).
  std::size_t adjacency_count() const;

 private:
  ExtensionAxis axis_ = ExtensionAxis::vertical;
  std::vector<Point> region_;
  std::vector<Point> sweep_;  // region in the sweep frame
  std::vector<Trapezoid> traps_;
  std::vector<std::vector<int>> at_vertex_;
  std::vector<std::vector<int>> along_edge_;

  friend class TrapDecompositionBuilder;
};

/// Rooted spanning tree over trapezoid adjacency, rooted at the trapezoid
/// incident to the given base segment.
struct TrapCellTree {
  int root = -1;
  std::vector<int> parent;
  std::vector<int> depth;
  std::vector<std::vector<int>> children;
};

TrapCellTree build_trap_tree(const TrapDecomposition& d, const Segment& base);

/// Linear scan. Boundary ties go to the smallest tree depth when a tree is
/// given, else to the lowest id.
int trap_containing(const TrapDecomposition& d, Point p,
                    const TrapCellTree* tree = nullptr);

/// Trapezoid along region edge e whose x-range (sweep frame) contains the
/// sweep abscissa of p; ties go to the smaller depth. Returns -1 if none.
int trap_on_edge(const TrapDecomposition& d, int e, Point p,
                 const std::vector<int>& depth);

}  // namespace l1sp
