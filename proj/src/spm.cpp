#include "l1sp/spm.hpp"

#include <cmath>
#include <string>

namespace l1sp {

namespace {

long double l1(Point a, Point b) {
  return std::fabs(static_cast<long double>(a.x) - b.x) +
         std::fabs(static_cast<long double>(a.y) - b.y);
}

}  // namespace

ShortestPathMap::ShortestPathMap(const Polygon& poly, Point s) : s_(s) {
  std::optional<Chord> chord = chord_through(poly, s);
  Polygon work = poly;
  if (!chord) {
    std::vector<Point> turned;
    turned.reserve(poly.size());
    for (const Point& p : poly.vertices()) turned.push_back(rotate_quarter(p, 1));
    Polygon rotated = Polygon::from_trusted(std::move(turned));
    chord = chord_through(rotated, rotate_quarter(s, 1));
    if (chord) {
      rot_ = 1;
      work = std::move(rotated);
    }
  }
  for (std::size_t i = 0; i < poly.size(); ++i) {
    vertex_index_.emplace(poly[i], static_cast<int>(i));
    if (poly[i] == s) source_vertex_ = static_cast<int>(i);
  }
  if (!chord) {
    rot_ = -1;
    engine_ = std::make_unique<QueryEngine>(poly);
    return;
  }
  forest_ = MountainForest::build(work, *chord, in(s));
  locator_ = PointLocator(forest_);
  anchor_dist_.resize(forest_.size());
  const Point si = in(s);
  for (const MountainCell& c : forest_.cells())
    anchor_dist_[c.id] =
        c.parent < 0 ? l1(si, c.anchor)
                     : anchor_dist_[c.parent] + l1(c.anchor, forest_.cell(c.parent).anchor);
}

int ShortestPathMap::cell_of(Point t) const {
  if (auto it = vertex_index_.find(out(t)); it != vertex_index_.end())
    return forest_.vertex(it->second).cell;
  const LocatorHit h = locator_.locate(t);
  if (h.cell < 0)
    throw GeometryError(ErrorCode::point_outside, "query point outside polygon");
  int c = h.cell;
  // On a window, use the parent.
  for (;;) {
    const MountainCell& cell = forest_.cell(c);
    if (cell.parent < 0) break;
    const Point q = cell.to_canon(t), a = cell.canon()[0], b = cell.canon()[1];
    if (q.y != a.y || q.x < a.x || q.x > b.x) break;
    c = cell.parent;
  }
  return c;
}

double ShortestPathMap::from_cell(int c, Point t) const {
  return static_cast<double>(anchor_dist_[c] + l1(t, forest_.cell(c).anchor));
}

double ShortestPathMap::distance(Point t) const {
  if (engine_) return engine_->query_distance(s_, t);
  if (t == s_) return 0;
  const Point ti = in(t);
  return from_cell(cell_of(ti), ti);
}

double ShortestPathMap::vertex_distance(std::size_t i) const {
  const Polygon& poly = engine_ ? engine_->polygon() : forest_.polygon();
  if (i >= poly.size())
    throw GeometryError(ErrorCode::index_out_of_range,
                        "vertex index " + std::to_string(i) + " out of range");
  if (engine_) return engine_->query_vertices(source_vertex_, i);
  const Point t = poly[i];
  if (t == in(s_)) return 0;
  return from_cell(forest_.vertex(i).cell, t);
}

Polyline ShortestPathMap::path(Point t) const {
  if (engine_) return engine_->query_path(t, s_);
  if (t == s_) return Polyline({s_});
  const Point ti = in(t);
  int c = cell_of(ti);
  Polyline p = forest_.canonical_path(c, ti, forest_.cell(c).anchor);
  for (;;) {
    const MountainCell& cell = forest_.cell(c);
    if (cell.parent < 0) break;
    p.append(forest_.canonical_path(cell.parent, cell.anchor,
                                    forest_.cell(cell.parent).anchor));
    c = cell.parent;
  }
  p.push(in(s_));
  p.merge_collinear();
  if (rot_ == 0) return p;
  Polyline back;
  for (const Point& q : p.points()) back.push(out(q));
  return back;
}

}  // namespace l1sp
