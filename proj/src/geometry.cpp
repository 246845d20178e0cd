#include "l1sp/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace l1sp {

Orientation orientation(Point p, Point q, Point r) {
  const double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
  if (v > 0) return Orientation::left;
  if (v < 0) return Orientation::right;
  return Orientation::collinear;
}

bool on_segment(Point p, Point q, Point r) {
  if (orient_sign(p, q, r) != 0) return false;
  return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
         std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = orient_sign(a, b, c);
  const int o2 = orient_sign(a, b, d);
  const int o3 = orient_sign(c, d, a);
  const int o4 = orient_sign(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
         (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
}

bool segments_cross_properly(Point a, Point b, Point c, Point d) {
  const int o1 = orient_sign(a, b, c);
  const int o2 = orient_sign(a, b, d);
  const int o3 = orient_sign(c, d, a);
  const int o4 = orient_sign(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_simple: return "NotSimple";
    case ErrorCode::not_general_position: return "NotGeneralPosition";
    case ErrorCode::too_few_vertices: return "TooFewVertices";
    case ErrorCode::degenerate_region: return "DegenerateRegion";
    case ErrorCode::base_not_on_boundary: return "BaseNotOnBoundary";
    case ErrorCode::point_outside: return "PointOutsidePolygon";
    case ErrorCode::point_not_in_cell: return "PointNotInCell";
    case ErrorCode::point_not_on_bottom: return "PointNotOnBottom";
    case ErrorCode::not_ancestor: return "NotAncestor";
    case ErrorCode::depth_out_of_range: return "DepthOutOfRange";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::unsupported_source: return "UnsupportedSource";
    case ErrorCode::generation_failed: return "GenerationFailed";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::io_error: return "IOError";
  }
  return "Unknown";
}

double signed_area(std::span<const Point> ring) {
  long double acc = 0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % n];
    acc += static_cast<long double>(p.x) * q.y -
           static_cast<long double>(q.x) * p.y;
  }
  return static_cast<double>(acc / 2);
}

double Polygon::area() const { return signed_area(vertices_); }

double Polygon::bbox_diagonal() const {
  double x0 = std::numeric_limits<double>::max(), y0 = x0;
  double x1 = std::numeric_limits<double>::lowest(), y1 = x1;
  for (const Point& p : vertices_) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return std::hypot(x1 - x0, y1 - y0);
}

namespace {

std::string fmt_point(Point p) {
  std::ostringstream os;
  os << "(" << p.x << "," << p.y << ")";
  return os.str();
}

// Edges i and j (i < j) of the ring violate simplicity.
bool edges_conflict(const std::vector<Point>& v, std::size_t i, std::size_t j) {
  const std::size_t n = v.size();
  const Point a = v[i], b = v[(i + 1) % n];
  const Point c = v[j], d = v[(j + 1) % n];
  const bool adjacent_next = (i + 1) % n == j;
  const bool adjacent_prev = (j + 1) % n == i;
  if (adjacent_next && adjacent_prev) {
    // n == 2; caught earlier.
    return true;
  }
  if (adjacent_next) {
    // Shared vertex b == c. Conflict when they fold back onto each other.
    return on_segment(a, b, d) || on_segment(c, d, a);
  }
  if (adjacent_prev) {
    // Shared vertex d == a.
    return on_segment(a, b, c) || on_segment(c, d, b);
  }
  return segments_intersect(a, b, c, d);
}

struct Conflict {
  std::size_t i, j;
};

std::optional<Conflict> find_conflict_brute(const std::vector<Point>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edges_conflict(v, i, j)) return Conflict{i, j};
  return std::nullopt;
}

// Shamos-Hoey sweep: any intersecting pair becomes adjacent in the status
// order before the sweep passes its leftmost common point.
std::optional<Conflict> find_conflict_sweep(const std::vector<Point>& v) {
  const std::size_t n = v.size();
  auto lo = [&](std::size_t e) {
    const Point a = v[e], b = v[(e + 1) % n];
    return lex_less(a, b) ? a : b;
  };
  auto hi = [&](std::size_t e) {
    const Point a = v[e], b = v[(e + 1) % n];
    return lex_less(a, b) ? b : a;
  };
  auto less = [&](std::size_t a, std::size_t b) {
    if (a == b) return false;
    const Point alo = lo(a), ahi = hi(a), blo = lo(b), bhi = hi(b);
    if (alo == blo) return orient_sign(alo, ahi, bhi) > 0;
    if (lex_less(blo, alo)) return orient_sign(blo, bhi, alo) < 0;
    return orient_sign(alo, ahi, blo) > 0;
  };
  std::set<std::size_t, decltype(less)> status(less);
  std::vector<std::set<std::size_t, decltype(less)>::iterator> where(
      n, status.end());
  auto check = [&](std::size_t i, std::size_t j) -> std::optional<Conflict> {
    if (edges_conflict(v, std::min(i, j), std::max(i, j)))
      return Conflict{std::min(i, j), std::max(i, j)};
    return std::nullopt;
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lex_less(v[a], v[b]); });
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 < n && v[order[k]] == v[order[k + 1]])
      return check(order[k], order[k + 1]).value_or(
          Conflict{std::min(order[k], order[k + 1]),
                   std::max(order[k], order[k + 1])});
    const std::size_t u = order[k];
    const std::size_t edges[2] = {(u + n - 1) % n, u};
    for (std::size_t e : edges) {
      if (!(hi(e) == v[u]) || where[e] == status.end()) continue;
      auto it = status.erase(where[e]);
      where[e] = status.end();
      if (it != status.end() && it != status.begin())
        if (auto c = check(*std::prev(it), *it)) return c;
    }
    for (std::size_t e : edges) {
      if (!(lo(e) == v[u])) continue;
      auto [it, fresh] = status.insert(e);
      if (!fresh) return check(e, *it).value_or(
          Conflict{std::min(e, *it), std::max(e, *it)});
      where[e] = it;
      if (it != status.begin())
        if (auto c = check(*std::prev(it), e)) return c;
      if (std::next(it) != status.end())
        if (auto c = check(e, *std::next(it))) return c;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> find_boundary_conflict(
    const std::vector<Point>& ring, bool sweep) {
  const auto c = sweep ? find_conflict_sweep(ring) : find_conflict_brute(ring);
  if (!c) return std::nullopt;
  return std::pair{c->i, c->j};
}

Polygon validate_polygon(std::vector<Point> raw) {
  if (raw.size() < 3)
    throw GeometryError(ErrorCode::too_few_vertices,
                        "polygon needs at least 3 vertices, got " +
                            std::to_string(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (!std::isfinite(raw[i].x) || !std::isfinite(raw[i].y))
      throw GeometryError(ErrorCode::not_general_position,
                          "non-finite coordinate", {i});

  // Simplicity first so a self-crossing input reports NotSimple even when
  // it also repeats a coordinate.
  const auto conflict =
      raw.size() <= 512 ? find_conflict_brute(raw) : find_conflict_sweep(raw);
  if (conflict) {
    const std::size_t n = raw.size();
    throw GeometryError(
        ErrorCode::not_simple,
        "edges " + std::to_string(conflict->i) + " " +
            fmt_point(raw[conflict->i]) + "-" +
            fmt_point(raw[(conflict->i + 1) % n]) + " and " +
            std::to_string(conflict->j) + " " + fmt_point(raw[conflict->j]) +
            "-" + fmt_point(raw[(conflict->j + 1) % n]) + " intersect",
        {conflict->i, (conflict->i + 1) % n, conflict->j, (conflict->j + 1) % n});
  }
  std::vector<std::size_t> order(raw.size());
  for (int axis = 0; axis < 2; ++axis) {
    auto coord = [&](std::size_t i) { return axis == 0 ? raw[i].x : raw[i].y; };
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return coord(a) < coord(b); });
    for (std::size_t k = 0; k + 1 < order.size(); ++k)
      if (coord(order[k]) == coord(order[k + 1])) {
        std::ostringstream os;
        os << "duplicated " << (axis == 0 ? 'x' : 'y') << "-coordinate "
           << coord(order[k]);
        throw GeometryError(ErrorCode::not_general_position, os.str(),
                            {std::min(order[k], order[k + 1]),
                             std::max(order[k], order[k + 1])});
      }
  }

  const double a = signed_area(raw);
  if (a == 0)
    throw GeometryError(ErrorCode::degenerate_region, "zero-area polygon");
  if (a < 0) std::reverse(raw.begin(), raw.end());
  return Polygon::from_trusted(std::move(raw));
}

namespace {

double dist_point_segment(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

}  // namespace

bool point_in_polygon(std::span<const Point> ring, Point p, double tol) {
  const std::size_t n = ring.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = ring[j], b = ring[i];
    if (on_segment(a, b, p)) return true;
    if (tol > 0 && dist_point_segment(p, a, b) <= tol) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      // Crossing test with an orientation predicate instead of a division.
      const int o = orient_sign(a, b, p);
      if ((b.y > a.y && o > 0) || (b.y < a.y && o < 0)) inside = !inside;
    }
  }
  return inside;
}

bool segment_in_ring(const Segment& seg, std::span<const Point> ring,
                     double tol) {
  const Point a = seg.a, b = seg.b;
  if (!point_in_polygon(ring, a, tol) || !point_in_polygon(ring, b, tol))
    return false;
  if (a == b) return true;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  auto param = [&](Point q) {
    return ((q.x - a.x) * dx + (q.y - a.y) * dy) / len2;
  };
  std::vector<double> ts{0.0, 1.0};
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point c = ring[i], d = ring[(i + 1) % n];
    if (!segments_intersect(a, b, c, d)) continue;
    const int o1 = orient_sign(a, b, c), o2 = orient_sign(a, b, d);
    if (o1 == 0 && o2 == 0) {
      ts.push_back(std::clamp(param(c), 0.0, 1.0));
      ts.push_back(std::clamp(param(d), 0.0, 1.0));
    } else if (o1 == 0) {
      ts.push_back(std::clamp(param(c), 0.0, 1.0));
    } else if (o2 == 0) {
      ts.push_back(std::clamp(param(d), 0.0, 1.0));
    } else {
      const double den = cross(b - a, d - c);
      if (den != 0) ts.push_back(std::clamp(cross(c - a, d - c) / den, 0.0, 1.0));
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double t = 0.5 * (ts[k] + ts[k + 1]);
    if (!point_in_polygon(ring, {a.x + t * dx, a.y + t * dy}, tol)) return false;
  }
  return true;
}

bool segment_in_polygon(const Segment& seg, const Polygon& poly, double tol) {
  return segment_in_ring(seg, poly.vertices(), tol);
}

std::optional<Point> perpendicular_projection(Point p, const Segment& e,
                                              const Polygon& poly) {
  Point foot;
  if (e.horizontal()) {
    if (p.x < std::min(e.a.x, e.b.x) || p.x > std::max(e.a.x, e.b.x))
      return std::nullopt;
    foot = {p.x, e.a.y};
  } else if (e.vertical()) {
    if (p.y < std::min(e.a.y, e.b.y) || p.y > std::max(e.a.y, e.b.y))
      return std::nullopt;
    foot = {e.a.x, p.y};
  } else {
    return std::nullopt;
  }
  if (!segment_in_polygon({p, foot}, poly)) return std::nullopt;
  return foot;
}

Polyline::Polyline(std::vector<Point> pts) {
  for (const Point& p : pts) push(p);
}

void Polyline::push(Point p) {
  if (pts_.empty() || !(pts_.back() == p)) pts_.push_back(p);
}

void Polyline::append(const Polyline& other) {
  for (const Point& p : other.pts_) push(p);
}

Polyline Polyline::reversed() const {
  Polyline r;
  r.pts_.assign(pts_.rbegin(), pts_.rend());
  return r;
}

void Polyline::merge_collinear() {
  if (pts_.size() < 3) return;
  std::vector<Point> out;
  out.reserve(pts_.size());
  out.push_back(pts_.front());
  for (std::size_t i = 1; i + 1 < pts_.size(); ++i) {
    const Point a = out.back(), b = pts_[i], c = pts_[i + 1];
    const bool between = (b.x - a.x) * (c.x - b.x) >= 0 &&
                         (b.y - a.y) * (c.y - b.y) >= 0;
    if (orient_sign(a, b, c) == 0 && between) continue;
    out.push_back(b);
  }
  out.push_back(pts_.back());
  pts_ = std::move(out);
}

double l1_length(std::span<const Point> pts) {
  long double acc = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    acc += std::abs(static_cast<long double>(pts[i].x) - pts[i - 1].x);
    acc += std::abs(static_cast<long double>(pts[i].y) - pts[i - 1].y);
  }
  return static_cast<double>(acc);
}

double l1_length(const Polyline& path) { return l1_length(path.points()); }

}  // namespace l1sp
