#include "l1sp/locator.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "l1sp/mountain.hpp"

namespace l1sp {

std::atomic<std::uint64_t>& locator_ops() {
  static std::atomic<std::uint64_t> ops{0};
  return ops;
}

TrapezoidalMap::TrapezoidalMap(std::vector<Seg> segs, std::uint64_t seed)
    : segs_(std::move(segs)) {
  std::mt19937_64 rng(seed);
  std::shuffle(segs_.begin(), segs_.end(), rng);
  pts_.reserve(2 * segs_.size());
  for (Seg& s : segs_) {
    if (lex_less(s.b, s.a)) {
      std::swap(s.a, s.b);
      std::swap(s.face_above, s.face_below);
    }
    pts_.push_back(s.a);
    pts_.push_back(s.b);
  }
  traps_.push_back({});
  traps_[0].node = 0;
  nodes_.push_back({leaf, 0});
  for (int s = 0; s < static_cast<int>(segs_.size()); ++s) insert(s);
}

int TrapezoidalMap::new_trap(int top, int bottom, int leftp, int rightp) {
  traps_.push_back({top, bottom, leftp, rightp, -1});
  return static_cast<int>(traps_.size()) - 1;
}

// Leaf just to the right of point r's vertical, on segment s.
int TrapezoidalMap::leaf_along(int s, int r) const {
  const Point rp = pts_[r];
  const Seg& S = segs_[s];
  int n = 0;
  while (nodes_[n].kind != leaf) {
    const Node& nd = nodes_[n];
    if (nd.kind == xnode) {
      n = lex_less(rp, pts_[nd.ref]) ? nd.left : nd.right;
    } else {
      const Seg& T = segs_[nd.ref];
      // Test the endpoint that lies inside the other segment's x-range.
      int o;
      if (!lex_less(S.a, T.a)) {
        o = orient_sign(T.a, T.b, S.a);
        if (o == 0) o = orient_sign(T.a, T.b, S.b);
      } else {
        o = -orient_sign(S.a, S.b, T.a);
        if (o == 0) o = -orient_sign(S.a, S.b, T.b);
      }
      if (o == 0) throw std::logic_error("overlapping locator segments");
      n = o > 0 ? nd.right : nd.left;
    }
  }
  return nodes_[n].ref;
}

void TrapezoidalMap::insert(int s) {
  const Seg S = segs_[s];
  const int pa = 2 * s, pb = 2 * s + 1;
  std::vector<int> crossed{leaf_along(s, pa)};
  while (traps_[crossed.back()].rightp >= 0 &&
         lex_less(pts_[traps_[crossed.back()].rightp], S.b))
    crossed.push_back(leaf_along(s, traps_[crossed.back()].rightp));

  const std::size_t k = crossed.size();
  const Trap first = traps_[crossed.front()];
  const Trap last = traps_[crossed.back()];
  int A = -1, B = -1;
  if (first.leftp < 0 || lex_less(pts_[first.leftp], S.a))
    A = new_trap(first.top, first.bottom, first.leftp, pa);
  if (last.rightp < 0 || lex_less(S.b, pts_[last.rightp]))
    B = new_trap(last.top, last.bottom, pb, last.rightp);

  std::vector<int> up(k), lo(k);
  int u = new_trap(first.top, s, pa, -1);
  int l = new_trap(s, first.bottom, pa, -1);
  for (std::size_t i = 0; i < k; ++i) {
    up[i] = u;
    lo[i] = l;
    if (i + 1 == k) break;
    const int rp = traps_[crossed[i]].rightp;
    const Trap next = traps_[crossed[i + 1]];
    const int o = orient_sign(S.a, S.b, pts_[rp]);
    if (o == 0) throw std::logic_error("locator endpoint on a segment");
    if (o > 0) {
      traps_[u].rightp = rp;
      u = new_trap(next.top, s, rp, -1);
    } else {
      traps_[l].rightp = rp;
      l = new_trap(s, next.bottom, rp, -1);
    }
  }
  traps_[u].rightp = pb;
  traps_[l].rightp = pb;

  auto leaf_of = [&](int t) {
    if (traps_[t].node < 0) {
      nodes_.push_back({leaf, t});
      traps_[t].node = static_cast<int>(nodes_.size()) - 1;
    }
    return traps_[t].node;
  };
  auto push = [&](Node nd) {
    nodes_.push_back(nd);
    return static_cast<int>(nodes_.size()) - 1;
  };
  for (std::size_t i = 0; i < k; ++i) {
    const int old = traps_[crossed[i]].node;
    const int below = leaf_of(lo[i]), above = leaf_of(up[i]);
    Node top{ynode, s, below, above};
    const bool with_b = i + 1 == k && B >= 0;
    const bool with_a = i == 0 && A >= 0;
    if (with_b) {
      const int b_leaf = leaf_of(B);
      top = Node{xnode, pb, push(top), b_leaf};
    }
    if (with_a) {
      const int a_leaf = leaf_of(A);
      top = Node{xnode, pa, a_leaf, push(top)};
    }
    nodes_[old] = top;
  }
}

int TrapezoidalMap::face(Point p, Point d) const {
  int n = 0;
  while (nodes_[n].kind != leaf) {
    const Node& nd = nodes_[n];
    bool right;
    if (nd.kind == xnode) {
      const Point q = pts_[nd.ref];
      if (p == q)
        right = d.x > 0 || (d.x == 0 && d.y > 0);
      else
        right = lex_less(q, p);
    } else {
      const Seg& T = segs_[nd.ref];
      int o = orient_sign(T.a, T.b, p);
      if (o == 0) {
        const double c = cross(T.b - T.a, d);
        o = c > 0 ? 1 : (c < 0 ? -1 : 0);
      }
      if (o == 0) {
        const double c = cross(T.b - T.a, Point{-d.y, d.x});
        o = c > 0 ? 1 : -1;
      }
      right = o > 0;
    }
    n = right ? nd.right : nd.left;
  }
  const Trap& t = traps_[nodes_[n].ref];
  return t.top < 0 ? -1 : segs_[t.top].face_below;
}

PointLocator::PointLocator(const MountainForest& forest, std::uint64_t seed)
    : seed_(seed) {
  using Seg = TrapezoidalMap::Seg;
  struct Item {
    double lo, hi;
    int face;
    bool above;  // face on the +y side (horizontal) or left side (vertical)
  };
  std::vector<Seg> segs;
  std::map<std::pair<int, double>, std::vector<Item>> groups;  // (axis, coord)

  int next = 0;
  offset_.reserve(forest.size() + 1);
  for (const MountainCell& cell : forest.cells()) {
    offset_.push_back(next);
    for (int t = 0; t < static_cast<int>(cell.trap.size()); ++t, ++next) {
      std::vector<Point> c = cell.trap.corners(t);
      for (Point& p : c) p = cell.to_world(p);
      const Point mid{(c[0].x + c[1].x + c[2].x + c[3].x) / 4,
                      (c[0].y + c[1].y + c[2].y + c[3].y) / 4};
      const std::pair<Point, Point> sides[] = {
          {c[0], c[1]}, {c[1], c[2]}, {c[3], c[2]}, {c[0], c[3]}};
      for (auto [a, b] : sides) {
        if (a == b) continue;
        if (a.x == b.x) {
          groups[{0, a.x}].push_back(
              {std::min(a.y, b.y), std::max(a.y, b.y), next, mid.x < a.x});
        } else if (a.y == b.y) {
          groups[{1, a.y}].push_back(
              {std::min(a.x, b.x), std::max(a.x, b.x), next, mid.y > a.y});
        } else {
          if (lex_less(b, a)) std::swap(a, b);
          Seg s{a, b};
          (orient_sign(a, b, mid) > 0 ? s.face_above : s.face_below) = next;
          segs.push_back(s);
        }
      }
    }
  }
  offset_.push_back(next);

  // Collinear axis-parallel sides: split into elementary intervals, record
  // the face on each side, and keep only boundaries between distinct faces.
  for (auto& [key, items] : groups) {
    const auto [axis, coord] = key;
    std::vector<double> xs;
    for (const Item& it : items) {
      xs.push_back(it.lo);
      xs.push_back(it.hi);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    const std::size_t m = xs.size() - 1;
    std::vector<int> fa(m, -1), fb(m, -1);
    for (const Item& it : items) {
      const std::size_t i0 = std::lower_bound(xs.begin(), xs.end(), it.lo) - xs.begin();
      const std::size_t i1 = std::lower_bound(xs.begin(), xs.end(), it.hi) - xs.begin();
      for (std::size_t i = i0; i < i1; ++i) (it.above ? fa : fb)[i] = it.face;
    }
    auto emit = [&, axis = axis, coord = coord](double lo, double hi, int a, int b) {
      if (a == b) return;
      Seg s;
      s.a = axis == 0 ? Point{coord, lo} : Point{lo, coord};
      s.b = axis == 0 ? Point{coord, hi} : Point{hi, coord};
      s.face_above = a;
      s.face_below = b;
      segs.push_back(s);
    };
    std::size_t start = 0;
    for (std::size_t i = 1; i <= m; ++i)
      if (i == m || fa[i] != fa[start] || fb[i] != fb[start]) {
        emit(xs[start], xs[i], fa[start], fb[start]);
        start = i;
      }
  }
  map_ = TrapezoidalMap(std::move(segs), seed);
}

LocatorHit PointLocator::locate(Point p) const {
  locator_ops().fetch_add(1, std::memory_order_relaxed);
  constexpr Point d{1.0, 0.6180339887498949};
  for (Point dir : {d, Point{-d.x, -d.y}}) {
    const int g = map_.face(p, dir);
    if (g < 0) continue;
    const auto it = std::upper_bound(offset_.begin(), offset_.end(), g);
    const int c = static_cast<int>(it - offset_.begin()) - 1;
    return {c, g - offset_[c]};
  }
  return {};
}

}  // namespace l1sp
