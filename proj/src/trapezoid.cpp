#include "l1sp/trapezoid.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace l1sp {

Point TrapDecomposition::edge_lo(int e) const {
  const Point a = sweep_[e], b = sweep_[(e + 1) % sweep_.size()];
  return lex_less(a, b) ? a : b;
}

Point TrapDecomposition::edge_hi(int e) const {
  const Point a = sweep_[e], b = sweep_[(e + 1) % sweep_.size()];
  return lex_less(a, b) ? b : a;
}

double TrapDecomposition::edge_y(int e, double x) const {
  const Point lo = edge_lo(e), hi = edge_hi(e);
  if (x == lo.x) return lo.y;
  if (x == hi.x) return hi.y;
  return lo.y + (x - lo.x) * (hi.y - lo.y) / (hi.x - lo.x);
}

std::vector<Point> TrapDecomposition::corners(int t) const {
  const Trapezoid& z = traps_[t];
  return {from_sweep({z.x_left, bottom_y(t, z.x_left)}),
          from_sweep({z.x_right, bottom_y(t, z.x_right)}),
          from_sweep({z.x_right, top_y(t, z.x_right)}),
          from_sweep({z.x_left, top_y(t, z.x_left)})};
}

double TrapDecomposition::area(int t) const {
  const Trapezoid& z = traps_[t];
  const double hl = top_y(t, z.x_left) - bottom_y(t, z.x_left);
  const double hr = top_y(t, z.x_right) - bottom_y(t, z.x_right);
  return 0.5 * (z.x_right - z.x_left) * (hl + hr);
}

bool TrapDecomposition::contains_sweep(int t, Point sp) const {
  const Trapezoid& z = traps_[t];
  if (sp.x < z.x_left || sp.x > z.x_right) return false;
  if (orient_sign(edge_lo(z.bottom_edge), edge_hi(z.bottom_edge), sp) < 0)
    return false;
  if (orient_sign(edge_lo(z.top_edge), edge_hi(z.top_edge), sp) > 0)
    return false;
  return true;
}

bool TrapDecomposition::contains(int t, Point p) const {
  return contains_sweep(t, to_sweep(p));
}

std::size_t TrapDecomposition::adjacency_count() const {
  std::size_t c = 0;
  for (const Trapezoid& z : traps_) c += z.right_nbrs.size();
  return c;
}

class TrapDecompositionBuilder {
 public:
  explicit TrapDecompositionBuilder(TrapDecomposition& d) : d_(d) {}

  void run();

 private:
  TrapDecomposition& d_;
  std::vector<char> dead_;

  struct EdgeLess {
    const TrapDecomposition* d;
    using is_transparent = void;
    struct Probe {
      Point p;
    };
    bool operator()(int a, int b) const {
      if (a == b) return false;
      const Point alo = d->edge_lo(a), ahi = d->edge_hi(a);
      const Point blo = d->edge_lo(b), bhi = d->edge_hi(b);
      if (alo == blo) return orient_sign(alo, ahi, bhi) > 0;
      if (lex_less(blo, alo)) return orient_sign(blo, bhi, alo) < 0;
      return orient_sign(alo, ahi, blo) > 0;
    }
    bool operator()(int a, Probe q) const {
      return orient_sign(d->edge_lo(a), d->edge_hi(a), q.p) > 0;
    }
    bool operator()(Probe q, int a) const {
      return orient_sign(d->edge_lo(a), d->edge_hi(a), q.p) < 0;
    }
  };

  int open(int bottom, int top, double x, int vertex) {
    Trapezoid z;
    z.bottom_edge = bottom;
    z.top_edge = top;
    z.x_left = x;
    z.left_vertex = vertex;
    d_.traps_.push_back(std::move(z));
    dead_.push_back(0);
    const int id = static_cast<int>(d_.traps_.size()) - 1;
    d_.at_vertex_[vertex].push_back(id);
    return id;
  }

  void close(int t, double x, int vertex) {
    Trapezoid& z = d_.traps_[t];
    z.x_right = x;
    z.right_vertex = vertex;
    if (z.x_right == z.x_left) {
      // Zero width (two events on one sweep line): splice it out.
      dead_[t] = 1;
      for (int l : z.left_nbrs) {
        auto& r = d_.traps_[l].right_nbrs;
        r.erase(std::remove(r.begin(), r.end(), t), r.end());
      }
    } else {
      d_.at_vertex_[vertex].push_back(t);
    }
  }

  void link(int from, int to) {
    if (dead_[from]) {
      for (int l : d_.traps_[from].left_nbrs) link(l, to);
      return;
    }
    d_.traps_[from].right_nbrs.push_back(to);
    d_.traps_[to].left_nbrs.push_back(from);
  }

  void compact();
};

void TrapDecompositionBuilder::run() {
  const std::size_t k = d_.sweep_.size();
  d_.at_vertex_.assign(k, {});
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return lex_less(d_.sweep_[a], d_.sweep_[b]);
  });

  EdgeLess less{&d_};
  std::set<int, EdgeLess> status(less);
  std::vector<std::set<int, EdgeLess>::iterator> where(k, status.end());
  std::vector<int> open_above(k, -1);

  auto insert = [&](int e) { where[e] = status.insert(e).first; };
  auto erase = [&](int e) {
    status.erase(where[e]);
    where[e] = status.end();
    open_above[e] = -1;
  };

  for (int v : order) {
    const Point pv = d_.sweep_[v];
    const int e_prev = static_cast<int>((v + k - 1) % k);
    const int e_next = v;
    const Point u = d_.sweep_[e_prev];
    const Point w = d_.sweep_[(v + 1) % k];
    const bool prev_left = lex_less(u, pv);
    const bool next_left = lex_less(w, pv);
    const bool convex = orient_sign(u, pv, w) > 0;
    const double x = pv.x;

    if (!prev_left && !next_left) {
      const bool next_upper = orient_sign(pv, u, w) > 0;
      const int upper = next_upper ? e_next : e_prev;
      const int lower = next_upper ? e_prev : e_next;
      if (convex) {
        insert(upper);
        insert(lower);
        open_above[lower] = open(lower, upper, x, v);
      } else {
        auto above_it = status.lower_bound(EdgeLess::Probe{pv});
        const int above = *above_it;
        const int below = *std::prev(above_it);
        const int t = open_above[below];
        close(t, x, v);
        insert(upper);
        insert(lower);
        const int t1 = open(upper, above, x, v);
        open_above[upper] = t1;
        const int t2 = open(below, lower, x, v);
        open_above[below] = t2;
        link(t, t1);
        link(t, t2);
      }
    } else if (prev_left && next_left) {
      const bool next_upper = std::next(where[e_prev]) == where[e_next];
      const int upper = next_upper ? e_next : e_prev;
      const int lower = next_upper ? e_prev : e_next;
      if (convex) {
        close(open_above[lower], x, v);
        erase(upper);
        erase(lower);
      } else {
        const int above = *std::next(where[upper]);
        const int below = *std::prev(where[lower]);
        const int t1 = open_above[upper];
        const int t2 = open_above[below];
        close(t1, x, v);
        close(t2, x, v);
        erase(upper);
        erase(lower);
        const int t = open(below, above, x, v);
        open_above[below] = t;
        link(t1, t);
        link(t2, t);
      }
    } else {
      const int e_in = prev_left ? e_prev : e_next;
      const int e_out = prev_left ? e_next : e_prev;
      if (prev_left) {
        // Boundary runs left to right: interior above.
        const int t = open_above[e_in];
        const int top = d_.traps_[t].top_edge;
        close(t, x, v);
        erase(e_in);
        insert(e_out);
        const int t2 = open(e_out, top, x, v);
        open_above[e_out] = t2;
        link(t, t2);
      } else {
        const int below = *std::prev(where[e_in]);
        const int t = open_above[below];
        close(t, x, v);
        erase(e_in);
        insert(e_out);
        const int t2 = open(below, e_out, x, v);
        open_above[below] = t2;
        link(t, t2);
      }
    }
  }
  compact();
}

void TrapDecompositionBuilder::compact() {
  std::vector<int> remap(d_.traps_.size(), -1);
  std::vector<Trapezoid> kept;
  for (std::size_t i = 0; i < d_.traps_.size(); ++i)
    if (!dead_[i]) {
      remap[i] = static_cast<int>(kept.size());
      kept.push_back(std::move(d_.traps_[i]));
    }
  auto fix = [&](std::vector<int>& ids) {
    std::vector<int> out;
    for (int i : ids)
      if (remap[i] >= 0) out.push_back(remap[i]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    ids = std::move(out);
  };
  for (Trapezoid& z : kept) {
    fix(z.left_nbrs);
    fix(z.right_nbrs);
  }
  for (auto& ids : d_.at_vertex_) fix(ids);
  d_.traps_ = std::move(kept);

  d_.along_edge_.assign(d_.sweep_.size(), {});
  for (std::size_t t = 0; t < d_.traps_.size(); ++t) {
    d_.along_edge_[d_.traps_[t].bottom_edge].push_back(static_cast<int>(t));
    d_.along_edge_[d_.traps_[t].top_edge].push_back(static_cast<int>(t));
  }
  for (auto& ids : d_.along_edge_)
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      return d_.traps_[a].x_left < d_.traps_[b].x_left;
    });
}

TrapDecomposition TrapDecomposition::build(std::vector<Point> region,
                                           ExtensionAxis axis) {
  if (region.size() < 3 || signed_area(region) <= 0)
    throw GeometryError(ErrorCode::degenerate_region,
                        "region must be a CCW cycle with positive area");
  TrapDecomposition d;
  d.axis_ = axis;
  d.region_ = std::move(region);
  d.sweep_.reserve(d.region_.size());
  for (const Point& p : d.region_) d.sweep_.push_back(d.to_sweep(p));
  TrapDecompositionBuilder(d).run();
  return d;
}

TrapCellTree build_trap_tree(const TrapDecomposition& d, const Segment& base) {
  const Point a = d.to_sweep(base.a), b = d.to_sweep(base.b);
  if (a.x != b.x || a.y == b.y)
    throw GeometryError(ErrorCode::base_not_on_boundary,
                        "base must be parallel to the extensions");
  const double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
  int root = -1;
  for (std::size_t t = 0; t < d.size(); ++t) {
    const Trapezoid& z = d[t];
    for (double x : {z.x_left, z.x_right}) {
      if (x != a.x) continue;
      const double y0 = d.bottom_y(static_cast<int>(t), x);
      const double y1 = d.top_y(static_cast<int>(t), x);
      if (std::min(hi, y1) - std::max(lo, y0) > 0) {
        // The side must be a region edge, not an internal extension.
        if ((x == z.x_left && z.left_nbrs.empty()) ||
            (x == z.x_right && z.right_nbrs.empty()))
          root = static_cast<int>(t);
      }
    }
    if (root >= 0) break;
  }
  if (root < 0)
    throw GeometryError(ErrorCode::base_not_on_boundary,
                        "no trapezoid is incident to the base");

  TrapCellTree tree;
  tree.root = root;
  tree.parent.assign(d.size(), -1);
  tree.depth.assign(d.size(), -1);
  tree.children.assign(d.size(), {});
  std::deque<int> queue{root};
  tree.depth[root] = 0;
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    auto visit = [&](int n) {
      if (tree.depth[n] >= 0) return;
      tree.depth[n] = tree.depth[t] + 1;
      tree.parent[n] = t;
      tree.children[t].push_back(n);
      queue.push_back(n);
    };
    for (int n : d[t].left_nbrs) visit(n);
    for (int n : d[t].right_nbrs) visit(n);
  }
  return tree;
}

int trap_containing(const TrapDecomposition& d, Point p,
                    const TrapCellTree* tree) {
  int best = -1;
  for (std::size_t t = 0; t < d.size(); ++t) {
    if (!d.contains(static_cast<int>(t), p)) continue;
    if (best < 0) {
      best = static_cast<int>(t);
      if (!tree) break;
    } else if (tree->depth[t] < tree->depth[best]) {
      best = static_cast<int>(t);
    }
  }
  if (best < 0)
    throw GeometryError(ErrorCode::point_outside, "point outside the region");
  return best;
}

int trap_on_edge(const TrapDecomposition& d, int e, Point p,
                 const std::vector<int>& depth) {
  const double x = d.to_sweep(p).x;
  const auto& ids = d.along_edge(e);
  auto it = std::upper_bound(ids.begin(), ids.end(), x, [&](double v, int t) {
    return v < d[t].x_left;
  });
  int best = -1;
  // At most two candidates share an abscissa on one edge.
  for (int step = 0; step < 3 && it != ids.begin(); ++step) {
    --it;
    const Trapezoid& z = d[*it];
    if (z.x_left <= x && x <= z.x_right) {
      if (best < 0 || depth[*it] < depth[best]) best = *it;
    } else if (z.x_right < x) {
      break;
    }
  }
  return best;
}

}  // namespace l1sp
