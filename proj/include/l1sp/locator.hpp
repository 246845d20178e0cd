#pragma once

// Point location over the union of all per-cell trapezoid decompositions.
//
// The sides of every trapezoid (in world coordinates) form a planar
// subdivision of the polygon; a randomized incremental trapezoidal map with
// a search DAG answers "which trapezoid contains p" in O(log n) expected
// time. Points on shared sides are resolved by perturbing them along a fixed
// irrational direction.

#include <atomic>
#include <cstdint>
#include <vector>

#include "l1sp/geometry.hpp"

namespace l1sp {

class MountainForest;

struct LocatorHit {
  int cell = -1;  // -1: outside the polygon
  int trap = -1;  // trapezoid of the cell's decomposition
};

/// Number of locate() calls since process start (or the last reset).
std::atomic<std::uint64_t>& locator_ops();

class TrapezoidalMap {
 public:
  struct Seg {
    Point a, b;  // a <lex b
    int face_above = -1;  // left side when vertical
    int face_below = -1;
  };

  TrapezoidalMap() = default;
  TrapezoidalMap(std::vector<Seg> segs, std::uint64_t seed);

  /// Face of p perturbed by an infinitesimal step along d, or -1.
  int face(Point p, Point d) const;

  const std::vector<Seg>& segments() const { return segs_; }
  std::size_t segment_count() const { return segs_.size(); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t trap_count() const { return traps_.size(); }

 private:
  enum Kind : std::uint8_t { leaf, xnode, ynode };
  struct Node {
    Kind kind;
    int ref;  // trap id, point id or segment id
    int left = -1, right = -1;  // below/above for y-nodes
  };
  struct Trap {
    int top = -1, bottom = -1;  // segment ids, -1 = unbounded
    int leftp = -1, rightp = -1;  // point ids, -1 = infinite
    int node = -1;
  };

  std::vector<Seg> segs_;
  std::vector<Point> pts_;  // endpoint i of segment i/2
  std::vector<Node> nodes_;
  std::vector<Trap> traps_;

  int leaf_along(int s, int r) const;
  void insert(int s);
  int new_trap(int top, int bottom, int leftp, int rightp);
};

class PointLocator {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0x5eed1a2b3c4dULL;

  PointLocator() = default;
  explicit PointLocator(const MountainForest& forest,
                        std::uint64_t seed = kDefaultSeed);

  /// Cell and trapezoid containing p; {-1, -1} outside. Counts one op.
  LocatorHit locate(Point p) const;

  std::uint64_t seed() const { return seed_; }
  const TrapezoidalMap& map() const { return map_; }

 private:
  std::uint64_t seed_ = kDefaultSeed;
  TrapezoidalMap map_;
  std::vector<int> offset_;  // first global trapezoid id of each cell
};

}  // namespace l1sp
