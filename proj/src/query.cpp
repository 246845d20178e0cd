#include "l1sp/query.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace l1sp {

namespace {

long double l1(Point a, Point b) {
  return std::fabs(static_cast<long double>(a.x) - b.x) +
         std::fabs(static_cast<long double>(a.y) - b.y);
}

}  // namespace

std::size_t PointHash::operator()(Point p) const noexcept {
  const auto x = std::bit_cast<std::uint64_t>(p.x + 0.0);
  const auto y = std::bit_cast<std::uint64_t>(p.y + 0.0);
  // splitmix64 finalizer; integral coordinates have all-zero low bits.
  std::uint64_t h = x * 0x9e3779b97f4a7c15ULL ^ y;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<std::size_t>(h ^ (h >> 31));
}

QueryEngine::QueryEngine(const Polygon& poly, std::uint64_t locator_seed)
    : forest_(MountainForest::build(poly, choose_chord(poly))),
      locator_(forest_, locator_seed) {
  init();
}

QueryEngine::QueryEngine(MountainForest forest, std::uint64_t locator_seed)
    : forest_(std::move(forest)), locator_(forest_, locator_seed) {
  init();
}

void QueryEngine::init() {
  const Polygon& poly = forest_.polygon();
  for (int side : {1, 2}) root_[side - 1] = forest_.roots(side).front();

  hot_.resize(forest_.size());
  std::vector<int> trap_parent;
  for (const MountainCell& c : forest_.cells()) {
    HotCell& h = hot_[c.id];
    h.tau = c.tau;
    h.dte = c.dist_tau_eps;
    h.parent = c.parent;
    h.depth = c.depth;
    h.side = c.side;
    h.rot = c.rot;
    if (c.parent >= 0 && forest_.cell(c.parent).parent >= 0 && c.tau_slot >= 0)
      h.tau_trap = forest_.cell(c.parent).assoc[c.tau_slot].trap;
    h.trap_base = static_cast<int>(trap_parent.size());
    for (std::size_t t = 0; t < c.trap.size(); ++t) {
      const int p = c.trap_tree.parent[t];
      trap_parent.push_back(p < 0 ? -1 : h.trap_base + p);
      trap_h_.push_back(c.trap[static_cast<int>(t)].x_right);
    }
  }
  trap_lca_ = LcaIndex(TreeShape(trap_parent));

  std::size_t cap = 16;
  while (cap < 2 * poly.size()) cap *= 2;
  vhash_.assign(cap, {Point{}, -1});
  vloc_.resize(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    std::size_t k = PointHash{}(poly[i]) & (cap - 1);
    while (vhash_[k].second >= 0) k = (k + 1) & (cap - 1);
    vhash_[k] = {poly[i], static_cast<int>(i)};

    const VertexAssoc& a = forest_.vertex(i);
    Loc& l = vloc_[i];
    l.p = poly[i];
    l.cell = a.cell;
    l.trap = a.trap;
    l.vertex = static_cast<int>(i);
    l.on_e = forest_.on_chord(l.p);
    const MountainCell& c = forest_.cell(a.cell);
    if (c.parent >= 0) {
      l.has_proj = true;
      if (a.proj_slot >= 0) {
        l.proj = c.assoc[a.proj_slot].p;
        l.proj_trap = c.assoc[a.proj_slot].trap;
      } else {
        l.proj = forest_.project_to_base(a.cell, l.p);
        l.proj_trap = forest_.trap_on_boundary(c.parent, c.window_edge, l.proj);
      }
    }
  }

  const LcaIndex& lca = forest_.lca_index();
  const TreeShape& tree = forest_.tree();
  const auto& ladder = forest_.la_index().ladder();
  std::vector<int> subtree(forest_.size(), 1);
  for (auto it = tree.preorder().rbegin(); it != tree.preorder().rend(); ++it)
    if (tree.parent(*it) >= 0) subtree[tree.parent(*it)] += subtree[*it];
  std::vector<int> best(forest_.size(), -1), room(forest_.size(), -1);
  anc_.resize(ladder.size());
  for (int k = 0, above = 0; k < static_cast<int>(ladder.size()); ++k) {
    const int c = ladder[k];
    above = k > 0 && tree.parent(c) == ladder[k - 1] ? above + 1 : 0;
    if (above > room[c]) {
      room[c] = above;
      best[c] = k;
    }
    const HotCell& h = hot_[c];
    const int e = lca.first(c);
    anc_[k] = {h.tau, h.dte, h.tau_trap, h.depth, e, e + 2 * (subtree[c] - 1)};
  }

  vhot_.resize(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Loc& l = vloc_[i];
    if (l.on_e) continue;
    const HotCell& h = hot_[l.cell];
    VertexHot& v = vhot_[i];
    v.proj = base_proj(l);
    v.dp = l1(l.p, v.proj);
    v.up = v.dp + l1(v.proj, h.tau) + h.dte;
    v.lpos = best[l.cell];
    v.proj_trap = l.proj_trap;
    v.euler = lca.first(l.cell);
    v.depth = h.depth;
  }
}

int QueryEngine::vertex_at(Point p) const {
  const std::size_t mask = vhash_.size() - 1;
  for (std::size_t k = PointHash{}(p) & mask; vhash_[k].second >= 0; k = (k + 1) & mask)
    if (vhash_[k].first == p) return vhash_[k].second;
  return -1;
}

QueryEngine::Loc QueryEngine::vertex_loc(std::size_t i) const {
  if (i >= vloc_.size())
    throw GeometryError(ErrorCode::index_out_of_range,
                        "vertex index " + std::to_string(i) + " out of range");
  return vloc_[i];
}

QueryEngine::Loc QueryEngine::resolve(Point p) const {
  if (const int v = vertex_at(p); v >= 0) return vloc_[v];
  const LocatorHit h = locator_.locate(p);
  if (h.cell < 0)
    throw GeometryError(ErrorCode::point_outside, "query point outside polygon");
  Loc l;
  l.p = p;
  l.cell = h.cell;
  l.trap = h.trap;
  l.on_e = forest_.on_chord(p);
  if (l.on_e) return l;
  // A point on a window belongs to the parent cell.
  for (;;) {
    const MountainCell& c = forest_.cell(l.cell);
    if (c.parent < 0) break;
    const Point q = c.to_canon(p), a = c.canon()[0], b = c.canon()[1];
    if (q.y != a.y || q.x < a.x || q.x > b.x) break;
    l.trap = forest_.trap_on_boundary(c.parent, c.window_edge, p);
    l.cell = c.parent;
  }
  l.trap = forest_.settle_trap(l.cell, l.trap, p);
  if (hot_[l.cell].parent >= 0) {
    l.has_proj = true;
    l.proj = forest_.project_to_base(l.cell, p);
  }
  return l;
}

LocatorHit QueryEngine::locate(Point p) const {
  const Loc l = resolve(p);
  return {l.cell, l.trap};
}

LocatorHit QueryEngine::locate_vertex(std::size_t i) const {
  const Loc l = vertex_loc(i);
  return {l.cell, l.trap};
}

void QueryEngine::check_chain(int c0, int c, Point t) const {
  if (c0 < 0 || c0 >= static_cast<int>(forest_.size()) || c < 0 ||
      c >= static_cast<int>(forest_.size()) ||
      forest_.cell(c).depth > forest_.cell(c0).depth ||
      forest_.level_ancestor(c0, forest_.cell(c).depth) != c)
    throw GeometryError(ErrorCode::not_ancestor,
                        "cell " + std::to_string(c) + " is not an ancestor of " +
                            std::to_string(c0));
  const double tol = 1e-9 * (1 + forest_.polygon().bbox_diagonal());
  if (!point_in_polygon(forest_.cell(c0).boundary, t, tol))
    throw GeometryError(ErrorCode::point_not_in_cell, "point not in cell");
}

std::pair<Point, double> QueryEngine::path_to_base(int c0, int c, Point t) const {
  check_chain(c0, c, t);
  Loc l;
  l.p = t;
  l.cell = c0;
  const auto [q, d] = to_ancestor(l, c);
  return {q, static_cast<double>(d)};
}

Polyline QueryEngine::emit_path_to_base(int c0, int c, Point t) const {
  check_chain(c0, c, t);
  Polyline p = path_to_ancestor(c0, t, c);
  p.merge_collinear();
  return p;
}

// Points on e go to the side of the other point (side 1 when both are on e)
// and sit in that side's root, in its base trapezoid.
std::pair<QueryEngine::Loc, QueryEngine::Loc> QueryEngine::pick_sides(
    Loc s, Loc t) const {
  auto side_of = [&](const Loc& l) { return hot_[l.cell].side; };
  int side = 1;
  if (s.on_e && !t.on_e) side = side_of(t);
  if (t.on_e && !s.on_e) side = side_of(s);
  for (Loc* l : {&s, &t})
    if (l->on_e) {
      l->cell = root_[side - 1];
      l->trap = forest_.cell(l->cell).trap_tree.root;
      l->has_proj = false;
      l->proj_trap = -1;
    }
  return {s, t};
}

Point QueryEngine::base_proj(const Loc& l) const {
  return l.has_proj ? l.proj : forest_.project_to_base(l.cell, l.p);
}

// Distance from l.p to its L1-projection on the base of ancestor a, and
// that projection.
std::pair<Point, long double> QueryEngine::to_ancestor(const Loc& l, int a) const {
  const Point tb = base_proj(l);
  long double d = l1(l.p, tb);
  if (a == l.cell) return {tb, d};
  const HotCell& h0 = hot_[l.cell];
  const HotCell& top = hot_[forest_.level_ancestor(l.cell, hot_[a].depth + 1)];
  d = d + l1(tb, h0.tau) + h0.dte - top.dte;
  return {top.tau, d};
}

// Moves l up to the base of the child of c on its way, or keeps it when it
// already lies in c. The trapezoid returned is in c's decomposition.
QueryEngine::Lift QueryEngine::lift(int c, const Loc& l) const {
  if (l.cell == c) return {l.p, 0, l.trap};
  const HotCell& h0 = hot_[l.cell];
  const int depth_c = hot_[c].depth;
  const Point tb = base_proj(l);
  long double d = l1(l.p, tb);
  if (h0.depth == depth_c + 1) {
    const int trap = l.proj_trap >= 0
                         ? l.proj_trap
                         : forest_.trap_on_boundary(c, forest_.cell(l.cell).window_edge, tb);
    return {tb, d, trap};
  }
  // The grandchild of c on the way fixes both the parent point and its
  // trapezoid.
  const HotCell& g = hot_[forest_.level_ancestor(l.cell, depth_c + 2)];
  d = d + l1(tb, h0.tau) + h0.dte - g.dte;
  return {g.tau, d, g.tau_trap};
}

long double QueryEngine::in_cell(int c, const Lift& a, const Lift& b) const {
  if (a.trap == b.trap) return l1(a.p, b.p);
  const HotCell& hc = hot_[c];
  const int ga = hc.trap_base + a.trap, gb = hc.trap_base + b.trap;
  const int sigma = trap_lca_.lca(ga, gb);
  if (sigma == ga || sigma == gb) return l1(a.p, b.p);
  // Both sides hang above sigma: go down to its top and across.
  const long double h = trap_h_[sigma];
  const Point ca = rotate_quarter(a.p, hc.rot), cb = rotate_quarter(b.p, hc.rot);
  return std::fabs(static_cast<long double>(ca.x) - cb.x) + (ca.y - h) +
         (cb.y - h);
}

double QueryEngine::distance(const Loc& s0, const Loc& t0) const {
  if (s0.p == t0.p) return 0;
  const auto [s, t] = pick_sides(s0, t0);
  const HotCell& cs = hot_[s.cell];
  const HotCell& ct = hot_[t.cell];
  if (cs.side != ct.side) {
    const auto [se, ds] = to_ancestor(s, root_[cs.side - 1]);
    const auto [te, dt] = to_ancestor(t, root_[ct.side - 1]);
    return static_cast<double>(ds + l1(se, te) + dt);
  }
  const int c = forest_.lca(s.cell, t.cell);
  const Lift a = lift(c, s), b = lift(c, t);
  return static_cast<double>(a.d + in_cell(c, a, b) + b.d);
}

// Usually found on v's own ladder, one read; otherwise through the jump
// pointers.
const QueryEngine::AncHot& QueryEngine::vertex_ancestor(const VertexHot& v,
                                                        int depth) const {
  const int k = v.lpos - (v.depth - depth);
  if (k >= 0) {
    const AncHot& a = anc_[k];
    if (a.depth == depth && a.euler <= v.euler && v.euler <= a.euler_end) return a;
  }
  const LaIndex& la = forest_.la_index();
  return anc_[la.ladder_pos(la.ladder()[v.lpos], v.depth, depth)];
}

// distance() for two vertices, reading vhot_ and anc_ instead of the cell
// records; same arithmetic, so the same bits.
double QueryEngine::vertex_distance(std::size_t i, std::size_t j) const {
  const std::size_t n = vhot_.size();
  if (i >= n || j >= n) return distance(vertex_loc(i), vertex_loc(j));
  if (i == j) return 0;
  const VertexHot& s = vhot_[i];
  const VertexHot& t = vhot_[j];
  if (s.lpos < 0 || t.lpos < 0) return distance(vloc_[i], vloc_[j]);
  const std::uint64_t key =
      forest_.lca_index().range_min(std::min(s.euler, t.euler), std::max(s.euler, t.euler));
  const int depth_c = static_cast<int>(key >> 32) - 1;
  if (depth_c < 0) {
    // Opposite sides of e.
    auto climb = [&](const VertexHot& v) -> std::pair<Point, long double> {
      if (v.depth == 0) return {v.proj, v.dp};
      const AncHot& top = vertex_ancestor(v, 1);
      return {top.tau, v.up - top.dte};
    };
    const auto [se, ds] = climb(s);
    const auto [te, dt] = climb(t);
    return static_cast<double>(ds + l1(se, te) + dt);
  }
  const int c = static_cast<int>(static_cast<std::uint32_t>(key)) - 1;
  auto lift_v = [&](const VertexHot& v, std::size_t idx) -> Lift {
    if (v.depth == depth_c) return lift(c, vloc_[idx]);
    if (v.depth == depth_c + 1) return {v.proj, v.dp, v.proj_trap};
    const AncHot& g = vertex_ancestor(v, depth_c + 2);
    return {g.tau, v.up - g.dte, g.tau_trap};
  };
  const Lift a = lift_v(s, i), b = lift_v(t, j);
  return static_cast<double>(a.d + in_cell(c, a, b) + b.d);
}

Polyline QueryEngine::path_to_ancestor(int c0, Point p, int a) const {
  const Point tb = forest_.project_to_base(c0, p);
  Polyline out = forest_.canonical_path(c0, p, tb);
  Point cur = tb;
  for (int c = c0; c != a;) {
    const MountainCell& cell = forest_.cell(c);
    out.append(forest_.canonical_path(cell.parent, cur, cell.tau));
    cur = cell.tau;
    if (cell.parent == a) break;
    c = cell.parent;
  }
  return out;
}

Polyline QueryEngine::path(const Loc& s0, const Loc& t0) const {
  if (s0.p == t0.p) return Polyline({s0.p});
  const auto [s, t] = pick_sides(s0, t0);
  const MountainCell& cs = forest_.cell(s.cell);
  const MountainCell& ct = forest_.cell(t.cell);
  Polyline out;
  if (cs.side != ct.side) {
    out = path_to_ancestor(s.cell, s.p, root_[cs.side - 1]);
    out.append(path_to_ancestor(t.cell, t.p, root_[ct.side - 1]).reversed());
  } else {
    const int c = forest_.lca(s.cell, t.cell);
    const Lift a = lift(c, s), b = lift(c, t);
    const MountainCell& cell = forest_.cell(c);
    if (s.cell != c)
      out = path_to_ancestor(
          s.cell, s.p, forest_.level_ancestor(s.cell, cell.depth + 1));
    else
      out.push(s.p);
    if (a.trap == b.trap) {
      out.push(b.p);
    } else {
      const int sigma = cell.trap_lca.lca(a.trap, b.trap);
      const double h = (sigma == a.trap || sigma == b.trap)
                           ? std::min(cell.to_canon(a.p).y, cell.to_canon(b.p).y)
                           : cell.trap[sigma].x_right;
      out.append(forest_.profile_path(c, a.p, b.p, h));
    }
    if (t.cell != c)
      out.append(path_to_ancestor(t.cell, t.p,
                                  forest_.level_ancestor(t.cell, cell.depth + 1))
                     .reversed());
  }
  out.merge_collinear();
  return out;
}

double QueryEngine::query_distance(Point s, Point t) const {
  return distance(resolve(s), resolve(t));
}

Polyline QueryEngine::query_path(Point s, Point t) const {
  return path(resolve(s), resolve(t));
}

double QueryEngine::query_vertices(std::size_t i, std::size_t j) const {
  return vertex_distance(i, j);
}

Polyline QueryEngine::query_vertex_path(std::size_t i, std::size_t j) const {
  return path(vertex_loc(i), vertex_loc(j));
}

RegisteredSet QueryEngine::register_points(const std::vector<Point>& pts) const {
  RegisteredSet set;
  set.locs_.reserve(pts.size());
  for (const Point& p : pts) {
    Loc l = resolve(p);
    const MountainCell& c = forest_.cell(l.cell);
    if (l.proj_trap < 0 && c.parent >= 0)
      l.proj_trap = forest_.trap_on_boundary(c.parent, c.window_edge, l.proj);
    set.locs_.push_back(l);
  }
  return set;
}

double QueryEngine::query_registered(const RegisteredSet& set, std::size_t i,
                                     std::size_t j) const {
  if (i >= set.size() || j >= set.size())
    throw GeometryError(ErrorCode::index_out_of_range, "unknown registered id");
  return distance(set[i], set[j]);
}

Polyline QueryEngine::query_registered_path(const RegisteredSet& set,
                                            std::size_t i, std::size_t j) const {
  if (i >= set.size() || j >= set.size())
    throw GeometryError(ErrorCode::index_out_of_range, "unknown registered id");
  return path(set[i], set[j]);
}

}  // namespace l1sp
