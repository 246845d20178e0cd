#include "l1sp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace l1sp {

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

VisibilityOracle::VisibilityOracle(const Polygon& poly)
    : poly_(poly), tol_(1e-9 * poly.bbox_diagonal()) {
  const std::size_t n = poly_.size();
  w_.assign(n, std::vector<double>(n, -1.0));
  for (std::size_t i = 0; i < n; ++i) {
    w_[i][i] = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent || visible(poly_[i], poly_[j]))
        w_[i][j] = w_[j][i] = l1_norm(poly_[i], poly_[j]);
    }
  }
}

bool VisibilityOracle::visible(Point a, Point b) const {
  return segment_in_polygon({a, b}, poly_);
}

std::vector<double> VisibilityOracle::link(Point p) const {
  const std::size_t n = poly_.size();
  std::vector<double> out(n, -1.0);
  for (std::size_t i = 0; i < n; ++i)
    if (segment_in_polygon({p, poly_[i]}, poly_, tol_))
      out[i] = l1_norm(p, poly_[i]);
  return out;
}

// Dense Dijkstra over the vertex graph; `src` holds the source's direct
// edge weights (-1 = none).
std::vector<double> VisibilityOracle::dijkstra(const std::vector<double>& src,
                                               std::vector<int>* pred) const {
  const std::size_t n = poly_.size();
  std::vector<long double> dist(n, kInf);
  std::vector<char> done(n, 0);
  if (pred) pred->assign(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    if (src[i] >= 0) dist[i] = src[i];
  for (std::size_t round = 0; round < n; ++round) {
    std::size_t u = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && (u == n || dist[i] < dist[u])) u = i;
    if (u == n || dist[u] == kInf) break;
    done[u] = 1;
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v] || w_[u][v] < 0) continue;
      const long double nd = dist[u] + w_[u][v];
      if (nd < dist[v]) {
        dist[v] = nd;
        if (pred) (*pred)[v] = static_cast<int>(u);
      }
    }
  }
  return {dist.begin(), dist.end()};
}

std::vector<double> VisibilityOracle::distances_from(Point s) const {
  return dijkstra(link(s), nullptr);
}

double VisibilityOracle::distance(Point s, Point t) const {
  if (!point_in_polygon(poly_.vertices(), s, tol_) ||
      !point_in_polygon(poly_.vertices(), t, tol_))
    throw GeometryError(ErrorCode::point_outside, "query point outside polygon");
  if (segment_in_polygon({s, t}, poly_, tol_)) return l1_norm(s, t);
  const std::vector<double> ds = dijkstra(link(s), nullptr);
  const std::vector<double> lt = link(t);
  long double best = kInf;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (lt[i] >= 0)
      best = std::min(best, static_cast<long double>(ds[i]) + lt[i]);
  return static_cast<double>(best);
}

Polyline VisibilityOracle::path(Point s, Point t) const {
  if (!point_in_polygon(poly_.vertices(), s, tol_) ||
      !point_in_polygon(poly_.vertices(), t, tol_))
    throw GeometryError(ErrorCode::point_outside, "query point outside polygon");
  if (segment_in_polygon({s, t}, poly_, tol_)) return Polyline({s, t});
  std::vector<int> pred;
  const std::vector<double> ds = dijkstra(link(s), &pred);
  const std::vector<double> lt = link(t);
  long double best = kInf;
  int last = -1;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (lt[i] >= 0 && static_cast<long double>(ds[i]) + lt[i] < best) {
      best = static_cast<long double>(ds[i]) + lt[i];
      last = static_cast<int>(i);
    }
  std::vector<Point> pts{t};
  for (int v = last; v >= 0; v = pred[v]) pts.push_back(poly_[v]);
  pts.push_back(s);
  std::reverse(pts.begin(), pts.end());
  return Polyline(std::move(pts));
}

double VisibilityOracle::vertex_distance(std::size_t i, std::size_t j) const {
  if (apsp_.empty()) {
    apsp_.resize(poly_.size());
    for (std::size_t k = 0; k < poly_.size(); ++k)
      apsp_[k] = dijkstra(w_[k], nullptr);
  }
  return apsp_[i][j];
}

double oracle_distance(const Polygon& poly, Point s, Point t) {
  return VisibilityOracle(poly).distance(s, t);
}

namespace {

std::vector<double> distinct_coords(std::size_t n, std::int64_t range,
                                    std::uint64_t& state) {
  std::unordered_set<std::int64_t> seen;
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const auto v = static_cast<std::int64_t>(splitmix64(state) %
                                             static_cast<std::uint64_t>(range));
    if (seen.insert(v).second) out.push_back(static_cast<double>(v));
  }
  return out;
}

std::vector<Point> random_points(std::size_t n, std::int64_t range,
                                 std::uint64_t& state) {
  if (range < static_cast<std::int64_t>(n))
    throw GeometryError(ErrorCode::generation_failed,
                        "coordinate range smaller than n");
  const auto xs = distinct_coords(n, range, state);
  const auto ys = distinct_coords(n, range, state);
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {xs[i], ys[i]};
  return pts;
}

// Reverse sub-chains between crossing edges until the ring is simple.
bool untangle(std::vector<Point>& v, std::size_t max_moves) {
  const std::size_t n = v.size();
  std::size_t moves = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        if (!segments_intersect(v[i], v[i + 1], v[j], v[(j + 1) % n])) continue;
        std::reverse(v.begin() + static_cast<std::ptrdiff_t>(i + 1),
                     v.begin() + static_cast<std::ptrdiff_t>(j + 1));
        changed = true;
        if (++moves > max_moves) return false;
      }
    }
  }
  return true;
}

}  // namespace

Polygon generate_polygon(std::size_t n, std::uint64_t seed,
                         std::int64_t range) {
  if (n < 3)
    throw GeometryError(ErrorCode::too_few_vertices, "n must be at least 3");
  std::uint64_t state = seed * 0x2545f4914f6cdd1dULL + n;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Point> pts = random_points(n, range, state);
    if (!untangle(pts, 50 * n * n)) continue;
    try {
      return validate_polygon(std::move(pts));
    } catch (const GeometryError&) {
    }
  }
  throw GeometryError(ErrorCode::generation_failed,
                      "no simple polygon after 64 attempts");
}

Polygon generate_star_polygon(std::size_t n, std::uint64_t seed,
                              std::int64_t range) {
  if (n < 3)
    throw GeometryError(ErrorCode::too_few_vertices, "n must be at least 3");
  std::uint64_t state = seed * 0x9e3779b97f4a7c15ULL + 7 * n + 1;
  const double c = static_cast<double>(range) / 2 + 0.37;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Point> pts = random_points(n, range, state);
    std::vector<std::pair<double, Point>> keyed;
    keyed.reserve(n);
    for (const Point& p : pts) keyed.push_back({std::atan2(p.y - c, p.x - c), p});
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < n; ++i) pts[i] = keyed[i].second;
    try {
      return validate_polygon(std::move(pts));
    } catch (const GeometryError&) {
    }
  }
  throw GeometryError(ErrorCode::generation_failed,
                      "no simple star polygon after 64 attempts");
}

Point random_interior_point(const Polygon& poly, std::uint64_t& state,
                            bool lattice) {
  double x0 = poly[0].x, x1 = x0, y0 = poly[0].y, y1 = y0;
  for (const Point& p : poly.vertices()) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  auto unit = [&] {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
  };
  for (int tries = 0; tries < 1000000; ++tries) {
    Point p{x0 + unit() * (x1 - x0), y0 + unit() * (y1 - y0)};
    if (lattice) p = {std::floor(p.x), std::floor(p.y)};
    if (point_in_polygon(poly.vertices(), p)) return p;
  }
  throw GeometryError(ErrorCode::generation_failed, "no interior sample");
}

}  // namespace l1sp
