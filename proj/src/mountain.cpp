#include "l1sp/mountain.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace l1sp {

namespace {

// Where the boundary meets a horizontal line.
struct LineHit {
  double x = 0;
  int edge = -1;    // crossing in the interior of this edge
  int vertex = -1;  // or exactly at this vertex
  bool toggles = true;
  int graze = 0;  // +1 both edges above, -1 both below
};

std::vector<LineHit> line_hits(const Polygon& poly, double y,
                               std::optional<Point> snap) {
  const std::size_t n = poly.size();
  std::vector<LineHit> hits;
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = poly[i], q = poly.next(i);
    if (p.y == y) {
      const double a = poly.prev(i).y - y, b = q.y - y;
      LineHit h;
      h.x = p.x;
      h.vertex = static_cast<int>(i);
      h.toggles = (a > 0) != (b > 0);
      h.graze = h.toggles ? 0 : (a > 0 ? 1 : -1);
      hits.push_back(h);
    } else if (q.y != y && (p.y > y) != (q.y > y)) {
      LineHit h;
      h.edge = static_cast<int>(i);
      h.x = p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y);
      if (snap && on_segment(p, q, *snap)) h.x = snap->x;
      hits.push_back(h);
    }
  }
  std::sort(hits.begin(), hits.end(),
            [](const LineHit& a, const LineHit& b) { return a.x < b.x; });
  return hits;
}

// Inside runs [first, last] of hit indices, delimited by toggling hits.
std::vector<std::pair<int, int>> inside_runs(const std::vector<LineHit>& hits) {
  std::vector<std::pair<int, int>> runs;
  int open = -1;
  for (int i = 0; i < static_cast<int>(hits.size()); ++i) {
    if (!hits[i].toggles) continue;
    if (open < 0) {
      open = i;
    } else {
      runs.push_back({open, i});
      open = -1;
    }
  }
  return runs;
}

Chord make_chord(double y, double x0, double x1) {
  return Chord{{{x0, y}, {x1, y}}};
}

struct PointIndex {
  std::vector<std::pair<Point, int>> items;
  explicit PointIndex(const std::vector<Point>& pts) {
    items.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      items.push_back({pts[i], static_cast<int>(i)});
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      return lex_less(a.first, b.first);
    });
  }
  int find(Point p) const {
    auto it = std::lower_bound(
        items.begin(), items.end(), p,
        [](const auto& a, Point b) { return lex_less(a.first, b); });
    return (it != items.end() && it->first == p) ? it->second : -1;
  }
};

bool is_left_wing(const std::vector<Point>& r) {
  const Point w = r.back(), a = r[0];
  return w.x < a.x && w.y > a.y;
}

bool is_right_wing(const std::vector<Point>& r) {
  const Point b = r[1], w = r[2];
  return w.x > b.x && w.y > b.y;
}

}  // namespace

Chord choose_chord(const Polygon& poly) {
  const std::size_t n = poly.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return poly[a].y < poly[b].y; });
  const std::size_t m = order[n / 2];
  const Point vm = poly[m];
  const bool regular = (poly.prev(m).y > vm.y) != (poly.next(m).y > vm.y);
  if (regular) {
    const auto hits = line_hits(poly, vm.y, std::nullopt);
    for (auto [i, j] : inside_runs(hits))
      if (hits[i].vertex == static_cast<int>(m) ||
          hits[j].vertex == static_cast<int>(m))
        return make_chord(vm.y, hits[i].x, hits[j].x);
  }
  const double y = 0.5 * (vm.y + poly[order[n / 2 + 1]].y);
  const auto hits = line_hits(poly, y, std::nullopt);
  const auto runs = inside_runs(hits);
  return make_chord(y, hits[runs.front().first].x, hits[runs.front().second].x);
}

std::optional<Chord> chord_through(const Polygon& poly, Point s) {
  if (!point_in_polygon(poly.vertices(), s))
    throw GeometryError(ErrorCode::point_outside, "source outside polygon");
  const auto hits = line_hits(poly, s.y, s);
  for (auto [i, j] : inside_runs(hits))
    if (hits[i].x <= s.x && s.x <= hits[j].x)
      return make_chord(s.y, hits[i].x, hits[j].x);
  return std::nullopt;
}

class ForestBuilder {
 public:
  ForestBuilder(MountainForest& f) : f_(f) {}
  void run();

 private:
  MountainForest& f_;

  struct Region {
    std::vector<Point> pts;  // canonical, edge 0 = base
    std::vector<int> ids;
    int rot = 0;
    int side = 1;
    int parent = -1;
    int window_edge = -1;
    Point anchor;
    int anchor_vertex = -1;
  };
  std::deque<Region> queue_;

  void split_sides();
  void process(Region r);
  void annotate();
};

void ForestBuilder::split_sides() {
  const Polygon& poly = f_.poly_;
  const std::size_t n = poly.size();
  const Segment e = f_.chord_.seg;
  auto hits = line_hits(poly, e.a.y, f_.source_);
  // Keep the hits on the chord: its two ends and the grazing vertices.
  std::vector<LineHit> on;
  for (const LineHit& h : hits)
    if (h.x >= e.a.x && h.x <= e.b.x) on.push_back(h);
  if (on.size() < 2 || on.front().x != e.a.x || on.back().x != e.b.x)
    throw std::logic_error("chord ends do not meet the boundary");

  auto after = [&](const LineHit& h) {
    return h.vertex >= 0 ? (h.vertex + 1) % n : (h.edge + 1) % n;
  };
  auto stop = [&](const LineHit& h) {
    return h.vertex >= 0 ? static_cast<std::size_t>(h.vertex)
                         : (h.edge + 1) % n;
  };
  auto point_of = [&](const LineHit& h) {
    return h.vertex >= 0 ? poly[h.vertex] : Point{h.x, e.a.y};
  };

  double area = 0;
  for (int side : {1, 2}) {
    std::vector<LineHit> cuts{on.front()};
    for (std::size_t i = 1; i + 1 < on.size(); ++i)
      if (on[i].graze == (side == 1 ? 1 : -1)) cuts.push_back(on[i]);
    cuts.push_back(on.back());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const LineHit& p = cuts[i];
      const LineHit& q = cuts[i + 1];
      const LineHit& first = side == 1 ? p : q;
      const LineHit& second = side == 1 ? q : p;
      Region r;
      r.side = side;
      r.rot = side == 1 ? 0 : 2;
      r.pts = {point_of(first), point_of(second)};
      r.ids = {first.vertex, second.vertex};
      for (std::size_t k = after(second), steps = 0; k != stop(first);
           k = (k + 1) % n) {
        if (++steps > n) throw std::logic_error("boundary walk did not close");
        r.pts.push_back(poly[k]);
        r.ids.push_back(static_cast<int>(k));
      }
      area += signed_area(r.pts);
      for (Point& pt : r.pts) pt = rotate_quarter(pt, r.rot);
      const Segment base{point_of(p), point_of(q)};
      if (f_.source_) {
        r.anchor = {std::clamp(f_.source_->x, base.a.x, base.b.x), base.a.y};
        if (r.anchor == base.a) r.anchor_vertex = p.vertex;
        if (r.anchor == base.b) r.anchor_vertex = q.vertex;
      } else {
        r.anchor = base.a;
        r.anchor_vertex = p.vertex;
      }
      queue_.push_back(std::move(r));
    }
  }
  const double total = poly.area();
  if (std::abs(area - total) > 1e-9 * std::max(1.0, std::abs(total)))
    throw std::logic_error("chord pieces do not partition the polygon");
}

void ForestBuilder::process(Region r) {
  const std::vector<Point>& R = r.pts;
  const int m = static_cast<int>(R.size());
  const auto vd = TrapDecomposition::build(R, ExtensionAxis::vertical);
  const bool lw = is_left_wing(R), rw = is_right_wing(R);
  auto in_mountain = [&](int t) {
    const int b = vd[t].bottom_edge;
    return b == 0 || (lw && b == m - 1) || (rw && b == 1);
  };

  struct Piece {
    double x, lo, hi;
    int top_edge;
  };
  std::vector<Piece> pieces;
  for (int t = 0; t < static_cast<int>(vd.size()); ++t) {
    if (!in_mountain(t)) continue;
    const Trapezoid& z = vd[t];
    auto scan = [&](const std::vector<int>& nbrs, double x) {
      for (int nb : nbrs) {
        if (in_mountain(nb)) continue;
        const double lo = std::max(vd.bottom_y(t, x), vd.bottom_y(nb, x));
        const double zt = vd.top_y(t, x), nt = vd.top_y(nb, x);
        const double hi = std::min(zt, nt);
        if (hi > lo)
          pieces.push_back({x, lo, hi, zt <= nt ? z.top_edge : vd[nb].top_edge});
      }
    };
    scan(z.left_nbrs, z.x_left);
    scan(z.right_nbrs, z.x_right);
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    return a.x < b.x || (a.x == b.x && a.lo < b.lo);
  });
  std::vector<Piece> windows;
  for (const Piece& p : pieces) {
    if (!windows.empty() && windows.back().x == p.x && windows.back().hi == p.lo) {
      windows.back().hi = p.hi;
      windows.back().top_edge = p.top_edge;
    } else {
      windows.push_back(p);
    }
  }

  const PointIndex index(R);
  struct Window {
    int iv;       // region index of the lower endpoint v
    int j;        // region edge holding v'
    Point vp;     // v'
    bool arc1;    // pocket runs forward from v to v'
  };
  std::vector<Window> wins;
  std::vector<char> removed(m, 0);
  for (const Piece& w : windows) {
    Window win;
    win.iv = index.find({w.x, w.lo});
    if (win.iv < 0) throw std::logic_error("window foot is not a region vertex");
    win.j = w.top_edge;
    win.vp = {w.x, w.hi};
    const int iv = win.iv;
    win.arc1 = ((0 - iv + m) % m) > ((win.j - iv + m) % m);
    if (win.arc1) {
      for (int k = (iv + 1) % m; k != (win.j + 1) % m; k = (k + 1) % m)
        removed[k] = 1;
    } else {
      for (int k = (win.j + 1) % m; k != iv; k = (k + 1) % m) removed[k] = 1;
    }
    wins.push_back(win);
  }

  // Window tops inserted on their ceiling edges, ordered along each edge.
  std::vector<std::vector<int>> on_edge(m);
  for (int w = 0; w < static_cast<int>(wins.size()); ++w)
    on_edge[wins[w].j].push_back(w);
  for (auto& list : on_edge)
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      const Point s = R[wins[a].j];
      return l1_norm(s, wins[a].vp) < l1_norm(s, wins[b].vp);
    });

  std::vector<Point> cb;
  std::vector<int> cids;
  std::vector<int> vp_pos(wins.size(), -1), v_pos(wins.size(), -1);
  std::vector<int> pos_of_region(m, -1);
  auto push = [&](Point p, int id) {
    if (!cb.empty() && cb.back() == p) return static_cast<int>(cb.size()) - 1;
    cb.push_back(p);
    cids.push_back(id);
    return static_cast<int>(cb.size()) - 1;
  };
  for (int i = 0; i < m; ++i) {
    if (!removed[i]) pos_of_region[i] = push(R[i], r.ids[i]);
    for (int w : on_edge[i]) {
      int id = -1;
      if (wins[w].vp == R[i]) id = r.ids[i];
      if (wins[w].vp == R[(i + 1) % m]) id = r.ids[(i + 1) % m];
      vp_pos[w] = push(wins[w].vp, id);
    }
  }
  if (cb.size() > 1 && cb.back() == cb.front()) {
    cb.pop_back();
    cids.pop_back();
    for (int& p : vp_pos)
      if (p == static_cast<int>(cb.size())) p = 0;
  }
  for (std::size_t w = 0; w < wins.size(); ++w) v_pos[w] = pos_of_region[wins[w].iv];

  MountainCell cell;
  cell.id = static_cast<int>(f_.cells_.size());
  cell.side = r.side;
  cell.rot = r.rot;
  cell.parent = r.parent;
  cell.window_edge = r.window_edge;
  cell.anchor = r.anchor;
  cell.anchor_vertex = r.anchor_vertex;
  cell.vertex_ids = cids;
  cell.left_wing = is_left_wing(cb);
  cell.right_wing = is_right_wing(cb);
  cell.boundary.reserve(cb.size());
  for (const Point& p : cb) cell.boundary.push_back(cell.to_world(p));
  cell.trap = TrapDecomposition::build(cb, ExtensionAxis::horizontal);
  cell.trap_tree = build_trap_tree(cell.trap, {cb[0], cb[1]});
  cell.trap_lca = LcaIndex(TreeShape(cell.trap_tree.parent));

  if (r.parent >= 0) {
    MountainCell& par = f_.cells_[r.parent];
    cell.depth = par.depth + 1;
    par.children.push_back(cell.id);
    // Parent point: drop the anchor to the parent's bottom, then slide to
    // the parent's base.
    const Point a = par.canon()[0], b = par.canon()[1];
    const Point v = par.to_canon(cell.anchor);
    const Point t = v.x < a.x ? a : (v.x > b.x ? b : Point{v.x, a.y});
    cell.tau = par.to_world(t);
    if (par.parent < 0) {
      cell.eps = cell.tau;
      cell.dist_tau_eps = 0;
    } else {
      cell.eps = par.eps;
      cell.dist_tau_eps = par.dist_tau_eps +
                          static_cast<long double>(std::abs(cell.tau.x - par.tau.x)) +
                          static_cast<long double>(std::abs(cell.tau.y - par.tau.y));
    }
  } else {
    f_.roots_[r.side - 1].push_back(cell.id);
  }

  const int id = cell.id;
  f_.cells_.push_back(std::move(cell));

  // Pockets become children; the window is edge 0 of each.
  for (std::size_t w = 0; w < wins.size(); ++w) {
    const Window& win = wins[w];
    Region child;
    const int iv = win.iv, j = win.j;
    auto add = [&](Point p, int pid) {
      if (!child.pts.empty() && child.pts.back() == p) return;
      child.pts.push_back(p);
      child.ids.push_back(pid);
    };
    const int vp_id = cids[vp_pos[w]];
    if (win.arc1) {
      add(win.vp, vp_id);
      for (int k = iv; k != (j + 1) % m; k = (k + 1) % m) add(R[k], r.ids[k]);
      child.window_edge = vp_pos[w] == 0 ? static_cast<int>(cb.size()) - 1
                                         : v_pos[w];
    } else {
      add(R[iv], r.ids[iv]);
      add(win.vp, vp_id);
      for (int k = (j + 1) % m; k != iv; k = (k + 1) % m) add(R[k], r.ids[k]);
      child.window_edge = vp_pos[w];
    }
    if (child.pts.size() > 1 && child.pts.back() == child.pts.front()) {
      child.pts.pop_back();
      child.ids.pop_back();
    }
    const int delta = child.pts[0].y > child.pts[1].y ? 1 : 3;
    for (Point& p : child.pts) p = rotate_quarter(p, delta);
    child.rot = (r.rot + delta) % 4;
    child.side = r.side;
    child.parent = id;
    child.anchor = rotate_quarter(R[iv], 4 - r.rot);
    child.anchor_vertex = r.ids[iv];
    queue_.push_back(std::move(child));
  }
}

void ForestBuilder::annotate() {
  auto& cells = f_.cells_;
  std::vector<int> parent(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) parent[c] = cells[c].parent;
  f_.tree_ = TreeShape(parent);
  f_.la_ = LaIndex(f_.tree_);
  f_.lca_ = LcaIndex(f_.tree_);

  // Vertex associations: shallowest cell holding the vertex off its base.
  const std::size_t n = f_.poly_.size();
  f_.vertex_.assign(n, {});
  auto min_touching = [&](int c, int local) {
    const auto& ts = cells[c].trap.touching_vertex(local);
    int best = ts.front();
    for (int t : ts)
      if (cells[c].trap_tree.depth[t] < cells[c].trap_tree.depth[best]) best = t;
    return f_.settle_trap(c, best, cells[c].boundary[local]);
  };
  for (const MountainCell& c : cells)
    for (std::size_t i = 2; i < c.vertex_ids.size(); ++i) {
      const int v = c.vertex_ids[i];
      if (v < 0 || f_.vertex_[v].cell >= 0) continue;
      f_.vertex_[v].cell = c.id;
      f_.vertex_[v].trap = min_touching(c.id, static_cast<int>(i));
    }
  for (std::size_t v = 0; v < n; ++v) {
    VertexAssoc& va = f_.vertex_[v];
    if (va.cell >= 0) continue;
    const Point p = f_.poly_[v];
    for (int side : {1, 2})
      for (int root : f_.roots(side)) {
        if (!on_segment(cells[root].boundary[0], cells[root].boundary[1], p))
          continue;
        const int t = f_.trap_scan(root, p);
        if (va.cell < 0) {
          va.cell = root;
          va.trap = t;
        } else if (va.alt_cell < 0 && cells[root].side != cells[va.cell].side) {
          va.alt_cell = root;
          va.alt_trap = t;
        }
      }
    if (va.cell < 0) throw std::logic_error("vertex without a cell");
  }

  // A_C: children's parent points and projections of associated vertices.
  struct Entry {
    Point p;
    double key;
    int trap;
  };
  std::vector<std::vector<Entry>> entries(cells.size());
  auto add_entry = [&](int c, Point p) {
    const MountainCell& cell = cells[c];
    const MountainCell& par = cells[cell.parent];
    entries[c].push_back({p, cell.to_canon(p).x,
                          f_.trap_on_boundary(par.id, cell.window_edge, p)});
  };
  for (const MountainCell& c : cells)
    if (c.parent >= 0 && cells[c.parent].parent >= 0) add_entry(c.parent, c.tau);
  for (std::size_t v = 0; v < n; ++v) {
    const int c = f_.vertex_[v].cell;
    if (cells[c].parent >= 0) add_entry(c, f_.project_to_base(c, f_.poly_[v]));
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto& list = entries[c];
    std::stable_sort(list.begin(), list.end(),
                     [](const Entry& a, const Entry& b) { return a.key < b.key; });
    auto& out = cells[c].assoc;
    for (const Entry& e : list)
      if (out.empty() || !(out.back().p == e.p)) out.push_back({e.p, e.trap});
  }
  auto slot_of = [&](int c, Point p) {
    const MountainCell& cell = cells[c];
    const double key = cell.to_canon(p).x;
    auto it = std::lower_bound(
        cell.assoc.begin(), cell.assoc.end(), key,
        [&](const AssocPoint& a, double k) { return cell.to_canon(a.p).x < k; });
    if (it == cell.assoc.end() || !(it->p == p))
      throw std::logic_error("A-chain entry missing");
    return static_cast<int>(it - cell.assoc.begin());
  };
  for (MountainCell& c : cells)
    if (c.parent >= 0 && cells[c.parent].parent >= 0)
      c.tau_slot = slot_of(c.parent, c.tau);
  for (std::size_t v = 0; v < n; ++v) {
    const int c = f_.vertex_[v].cell;
    if (cells[c].parent >= 0)
      f_.vertex_[v].proj_slot = slot_of(c, f_.project_to_base(c, f_.poly_[v]));
  }
}

void ForestBuilder::run() {
  split_sides();
  while (!queue_.empty()) {
    Region r = std::move(queue_.front());
    queue_.pop_front();
    process(std::move(r));
  }
  annotate();
}

MountainForest MountainForest::build(const Polygon& poly, const Chord& chord,
                                      std::optional<Point> source) {
  MountainForest f;
  f.poly_ = poly;
  f.chord_ = chord;
  f.source_ = source;
  ForestBuilder(f).run();
  return f;
}

MountainForest MountainForest::assemble(Polygon poly, Chord chord,
                                         std::optional<Point> source,
                                         std::vector<MountainCell> cells,
                                         std::vector<VertexAssoc> vertex) {
  MountainForest f;
  f.poly_ = std::move(poly);
  f.chord_ = chord;
  f.source_ = source;
  f.cells_ = std::move(cells);
  f.vertex_ = std::move(vertex);
  std::vector<int> parent(f.cells_.size());
  for (std::size_t i = 0; i < f.cells_.size(); ++i) {
    MountainCell& c = f.cells_[i];
    c.id = static_cast<int>(i);
    c.children.clear();
    std::vector<Point> cb;
    cb.reserve(c.boundary.size());
    for (const Point& p : c.boundary) cb.push_back(c.to_canon(p));
    c.trap = TrapDecomposition::build(cb, ExtensionAxis::horizontal);
    c.trap_tree = build_trap_tree(c.trap, {cb[0], cb[1]});
    c.trap_lca = LcaIndex(TreeShape(c.trap_tree.parent));
    parent[i] = c.parent;
    if (c.parent >= 0) {
      if (c.parent >= c.id)
        throw GeometryError(ErrorCode::parse_error, "cell parent out of order");
      MountainCell& par = f.cells_[c.parent];
      c.depth = par.depth + 1;
      par.children.push_back(c.id);
    } else {
      c.depth = 0;
      f.roots_[c.side - 1].push_back(c.id);
    }
  }
  f.tree_ = TreeShape(parent);
  f.la_ = LaIndex(f.tree_);
  f.lca_ = LcaIndex(f.tree_);
  return f;
}

bool MountainForest::on_chord(Point p) const {
  const Segment& e = chord_.seg;
  return p.y == e.a.y && e.a.x <= p.x && p.x <= e.b.x;
}

Point MountainForest::project_to_base(int c, Point p) const {
  const MountainCell& cell = cells_[c];
  const Point a = cell.canon()[0], b = cell.canon()[1];
  const Point q = cell.to_canon(p);
  const Point t = q.x < a.x ? a : (q.x > b.x ? b : Point{q.x, a.y});
  return cell.to_world(t);
}

int MountainForest::settle_trap(int c, int start, Point p) const {
  const MountainCell& cell = cells_[c];
  const Point q = cell.to_canon(p);
  const double x = cell.trap.to_sweep(q).x;
  const auto& depth = cell.trap_tree.depth;
  int cur = start;
  for (bool moved = true; moved;) {
    moved = false;
    const Trapezoid& z = cell.trap[cur];
    // Neighbours share only a vertical side, so skip the scan off the sides.
    for (const auto* list : {x == z.x_left ? &z.left_nbrs : nullptr,
                             x == z.x_right ? &z.right_nbrs : nullptr}) {
      if (!list) continue;
      for (int nb : *list)
        if (!moved && depth[nb] < depth[cur] && cell.trap.contains(nb, q)) {
          cur = nb;
          moved = true;
        }
    }
  }
  return cur;
}

int MountainForest::trap_on_boundary(int c, int edge, Point p) const {
  const MountainCell& cell = cells_[c];
  const int t =
      trap_on_edge(cell.trap, edge, cell.to_canon(p), cell.trap_tree.depth);
  if (t < 0) throw std::logic_error("point not along the boundary edge");
  return settle_trap(c, t, p);
}

int MountainForest::trap_scan(int c, Point p) const {
  const MountainCell& cell = cells_[c];
  return trap_containing(cell.trap, cell.to_canon(p), &cell.trap_tree);
}

Polyline MountainForest::profile_path(int c, Point p, Point q, double h) const {
  const MountainCell& cell = cells_[c];
  const auto& cb = cell.canon();
  const Point a = cb[0], b = cb[1];
  const Point lw = cb.back(), rw = cb[2];
  const Point cp = cell.to_canon(p), cq = cell.to_canon(q);

  auto bottom = [&](double x) {
    if (x < a.x) {
      if (!cell.left_wing || x < lw.x) return -std::numeric_limits<double>::infinity();
      return a.y + (x - a.x) * (lw.y - a.y) / (lw.x - a.x);
    }
    if (x > b.x) {
      if (!cell.right_wing || x > rw.x) return -std::numeric_limits<double>::infinity();
      return b.y + (x - b.x) * (rw.y - b.y) / (rw.x - b.x);
    }
    return a.y;
  };
  auto g = [&](double x) { return std::max(h, bottom(x)); };

  std::vector<double> breaks{a.x, b.x};
  if (cell.left_wing && a.y < h && h < lw.y)
    breaks.push_back(a.x + (h - a.y) * (lw.x - a.x) / (lw.y - a.y));
  if (cell.right_wing && b.y < h && h < rw.y)
    breaks.push_back(b.x + (h - b.y) * (rw.x - b.x) / (rw.y - b.y));
  const double x0 = std::min(cp.x, cq.x), x1 = std::max(cp.x, cq.x);
  std::vector<double> mid;
  for (double x : breaks)
    if (x0 < x && x < x1) mid.push_back(x);
  std::sort(mid.begin(), mid.end());
  if (cq.x < cp.x) std::reverse(mid.begin(), mid.end());

  std::vector<Point> pts{cp, {cp.x, std::min(cp.y, g(cp.x))}};
  for (double x : mid) {
    if (x == a.x) pts.push_back({x, std::max(h, a.y)});
    else if (x == b.x) pts.push_back({x, std::max(h, b.y)});
    else pts.push_back({x, h});
  }
  pts.push_back({cq.x, std::min(cq.y, g(cq.x))});
  pts.push_back(cq);
  Polyline out;
  for (const Point& pt : pts) out.push(cell.to_world(pt));
  out.merge_collinear();
  return out;
}

Polyline MountainForest::canonical_path(int c, Point p, Point q) const {
  const MountainCell& cell = cells_[c];
  const Point a = cell.canon()[0], b = cell.canon()[1];
  const Point cq = cell.to_canon(q);
  if (cq.y != a.y || cq.x < a.x || cq.x > b.x)
    throw GeometryError(ErrorCode::point_not_on_bottom, "q is not on the base");
  if (!point_in_polygon(cell.boundary, p, 1e-9 * (1 + poly_.bbox_diagonal())))
    throw GeometryError(ErrorCode::point_not_in_cell, "p is not in the cell");
  return profile_path(c, p, q, a.y);
}

Point MountainForest::l1_projection(int c0, int c, Point t) const {
  if (c == c0) return project_to_base(c0, t);
  const int dc = tree_.depth(c);
  if (dc >= tree_.depth(c0) || la_.level_ancestor(c0, dc) != c)
    throw GeometryError(ErrorCode::not_ancestor, "cell is not an ancestor");
  return cells_[la_.level_ancestor(c0, dc + 1)].tau;
}

std::size_t MountainForest::stored_size() const {
  std::size_t s = cells_.size();
  for (const MountainCell& c : cells_) s += c.trap.size() + c.assoc.size();
  return s;
}

}  // namespace l1sp
