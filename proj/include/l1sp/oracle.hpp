#pragma once

// Ground truth for tests: L1-weighted visibility-graph Dijkstra, and random
// simple polygon generators.
//
// A Euclidean geodesic in a simple polygon bends only at reflex vertices and
// is L1-optimal too, so the cheapest L1 path in the visibility graph over the
// vertices (plus the two query points) is the L1 geodesic distance.

#include <cstdint>
#include <vector>

#include "l1sp/geometry.hpp"

namespace l1sp {

class VisibilityOracle {
 public:
  explicit VisibilityOracle(const Polygon& poly);

  const Polygon& polygon() const { return poly_; }

  double distance(Point s, Point t) const;
  /// Dijkstra predecessor chain from s to t.
  Polyline path(Point s, Point t) const;
  /// Geodesic distances from s to every polygon vertex.
  std::vector<double> distances_from(Point s) const;
  /// All-pairs vertex distances, computed on first use.
  double vertex_distance(std::size_t i, std::size_t j) const;

  bool visible(Point a, Point b) const;

 private:
  Polygon poly_;
  std::vector<std::vector<double>> w_;  // vertex graph, -1 = not visible
  double tol_ = 0;  // slack for query points computed on the boundary
  mutable std::vector<std::vector<double>> apsp_;

  std::vector<double> link(Point p) const;
  std::vector<double> dijkstra(const std::vector<double>& src,
                               std::vector<int>* pred) const;
};

double oracle_distance(const Polygon& poly, Point s, Point t);

/// Random simple polygon with integer coordinates in [0, range), pairwise
/// distinct x and y, untangled by 2-opt moves. Deterministic per seed.
Polygon generate_polygon(std::size_t n, std::uint64_t seed,
                         std::int64_t range = std::int64_t{1} << 20);

/// Random star-shaped polygon (points sorted by angle around an interior
/// centre). Linear-time construction, for large n.
Polygon generate_star_polygon(std::size_t n, std::uint64_t seed,
                              std::int64_t range = std::int64_t{1} << 20);

/// Uniform random point inside the polygon (rejection sampling). With
/// `lattice`, integer coordinates.
Point random_interior_point(const Polygon& poly, std::uint64_t& state,
                            bool lattice);

/// splitmix64 step; portable deterministic randomness for generators.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace l1sp
