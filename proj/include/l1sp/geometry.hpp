#pragma once

// Planar primitives shared by every module: points, segments, simple
// polygons, polylines, L1 measures and the containment predicates used by
// the decomposition, the query engine and the test oracle.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace l1sp {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }

/// Lexicographic (x, then y) order. All sweeps use it as a symbolic shear so
/// that equal x-coordinates never need special handling.
inline bool lex_less(Point a, Point b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

inline double l1_norm(Point a, Point b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

struct Segment {
  Point a;
  Point b;

  bool horizontal() const { return a.y == b.y && a.x != b.x; }
  bool vertical() const { return a.x == b.x && a.y != b.y; }
  bool axis_aligned() const { return horizontal() || vertical(); }
  bool degenerate() const { return a == b; }
};

enum class Orientation { right = -1, collinear = 0, left = 1 };

/// Sign of cross(q - p, r - p). Plain floating evaluation; exact for integer
/// coordinates below 2^26.
Orientation orientation(Point p, Point q, Point r);

inline int orient_sign(Point p, Point q, Point r) {
  return static_cast<int>(orientation(p, q, r));
}

/// True when r lies on the closed segment pq (exact collinearity test).
bool on_segment(Point p, Point q, Point r);

/// Closed segments ab and cd share at least one point.
bool segments_intersect(Point a, Point b, Point c, Point d);

/// Closed segments cross at a single point interior to both.
bool segments_cross_properly(Point a, Point b, Point c, Point d);

enum class ErrorCode {
  not_simple,
  not_general_position,
  too_few_vertices,
  degenerate_region,
  base_not_on_boundary,
  point_outside,
  point_not_in_cell,
  point_not_on_bottom,
  not_ancestor,
  depth_out_of_range,
  index_out_of_range,
  unsupported_source,
  generation_failed,
  parse_error,
  io_error,
};

const char* to_string(ErrorCode code);

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what,
                std::vector<std::size_t> vertices = {})
      : std::runtime_error(what), code_(code), vertices_(std::move(vertices)) {}
  ErrorCode code() const { return code_; }
  /// Input vertex positions involved, when the error is about specific ones.
  const std::vector<std::size_t>& vertices() const { return vertices_; }

 private:
  ErrorCode code_;
  std::vector<std::size_t> vertices_;
};

/// A validated simple polygon, counterclockwise, in general position
/// (pairwise distinct x and pairwise distinct y over all vertices).
class Polygon {
 public:
  Polygon() = default;

  std::size_t size() const { return vertices_.size(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  Point next(std::size_t i) const { return vertices_[(i + 1) % size()]; }
  Point prev(std::size_t i) const {
    return vertices_[(i + size() - 1) % size()];
  }
  Segment edge(std::size_t i) const { return {vertices_[i], next(i)}; }

  double area() const;
  double bbox_diagonal() const;

  // Only validate_polygon produces instances; this entry point is for code
  // that already holds a checked vertex cycle (snapshot loading).
  static Polygon from_trusted(std::vector<Point> ccw) {
    Polygon p;
    p.vertices_ = std::move(ccw);
    return p;
  }

 private:
  std::vector<Point> vertices_;
};

/// Signed area (positive for counterclockwise order).
double signed_area(std::span<const Point> ring);

/// Checks simplicity and general position; returns the polygon in CCW order
/// (input reversed when it was clockwise).
Polygon validate_polygon(std::vector<Point> raw);

/// First offending edge pair of a vertex ring, if any. `sweep` selects the
/// O(n log n) sweep instead of the quadratic scan.
std::optional<std::pair<std::size_t, std::size_t>> find_boundary_conflict(
    const std::vector<Point>& ring, bool sweep);

/// Boundary-inclusive point-in-polygon. `tol` widens the boundary band.
bool point_in_polygon(std::span<const Point> ring, Point p, double tol = 0.0);

/// Every point of the closed segment lies in the closed polygon.
bool segment_in_polygon(const Segment& seg, const Polygon& poly,
                        double tol = 0.0);
bool segment_in_ring(const Segment& seg, std::span<const Point> ring,
                     double tol = 0.0);

/// Foot of the perpendicular from p on the axis-parallel segment e, if the
/// connecting segment lies inside poly.
std::optional<Point> perpendicular_projection(Point p, const Segment& e,
                                              const Polygon& poly);

class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Point> pts);

  const std::vector<Point>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  Point front() const { return pts_.front(); }
  Point back() const { return pts_.back(); }

  /// Appends p unless it repeats the last point.
  void push(Point p);
  /// Appends other, skipping its first point when it repeats our last one.
  void append(const Polyline& other);
  Polyline reversed() const;
  /// Drops interior points that are collinear with their neighbours and
  /// lie between them.
  void merge_collinear();

 private:
  std::vector<Point> pts_;
};

/// Sum of |dx|+|dy| over consecutive points, accumulated in extended
/// precision and rounded once.
double l1_length(const Polyline& path);
double l1_length(std::span<const Point> pts);

/// Rotation by k quarter turns counterclockwise about the origin (exact).
inline Point rotate_quarter(Point p, int k) {
  switch (((k % 4) + 4) % 4) {
    case 1: return {-p.y, p.x};
    case 2: return {-p.x, -p.y};
    case 3: return {p.y, -p.x};
    default: return p;
  }
}

}  // namespace l1sp
