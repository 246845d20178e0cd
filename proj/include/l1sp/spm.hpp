#pragma once

// Single-source L1 shortest path map. The polygon is decomposed with respect
// to the maximal horizontal chord through the source s; every cell C keeps
// an anchor a_C with d(s, t) = d(s, a_C) + |t a_C|_1 for all t in C.
//
// When the horizontal chord through s degenerates to s itself (s is a convex
// vertex that is a local y-extremum), the map is built on the polygon turned
// by a quarter turn, i.e. on the vertical chord. If both chords degenerate,
// queries are answered by a two-point engine with s fixed.

#include <memory>
#include <unordered_map>
#include <vector>

#include "l1sp/geometry.hpp"
#include "l1sp/locator.hpp"
#include "l1sp/mountain.hpp"
#include "l1sp/query.hpp"

namespace l1sp {

class ShortestPathMap {
 public:
  /// Throws PointOutsidePolygon.
  ShortestPathMap(const Polygon& poly, Point s);

  double distance(Point t) const;
  Polyline path(Point t) const;
  /// O(1): no point location.
  double vertex_distance(std::size_t i) const;

  Point source() const { return s_; }
  /// Quarter turns applied before building (0 or 1); -1 when the two-point
  /// fallback is used.
  int rotation() const { return rot_; }
  const MountainForest& forest() const { return forest_; }
  /// d(s, a_C) per cell.
  long double anchor_distance(int c) const { return anchor_dist_[c]; }

 private:
  Point s_;
  int rot_ = 0;
  MountainForest forest_;
  PointLocator locator_;
  std::vector<long double> anchor_dist_;
  std::unordered_map<Point, int, PointHash> vertex_index_;
  std::unique_ptr<QueryEngine> engine_;
  int source_vertex_ = -1;

  Point in(Point p) const { return rotate_quarter(p, rot_); }
  Point out(Point p) const { return rotate_quarter(p, 4 - rot_); }
  int cell_of(Point t) const;  // rotated frame
  double from_cell(int c, Point t) const;
};

}  // namespace l1sp
