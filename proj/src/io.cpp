#include "l1sp/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace l1sp {

static_assert(std::endian::native == std::endian::little,
              "snapshot code assumes a little-endian host");

std::string format_double(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v + 0.0);
  return {buf, r.ptr};
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw GeometryError(ErrorCode::parse_error,
                      "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double number(std::string_view tok, int line) {
  double v = 0;
  const char* end = tok.data() + tok.size();
  const char* b = tok.data();
  if (b != end && *b == '+') ++b;
  auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v))
    parse_fail(line, "bad number '" + std::string(tok) + "'");
  return v;
}

std::size_t index(std::string_view tok, int line) {
  std::size_t v = 0;
  auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
    parse_fail(line, "bad vertex index '" + std::string(tok) + "'");
  return v;
}

std::string_view strip_comment(std::string_view s) {
  return s.substr(0, s.find('#'));
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in)
    throw GeometryError(ErrorCode::io_error, "cannot open " + path.string());
  return in;
}

}  // namespace

namespace {

std::vector<Point> parse_polygon_lines(std::istream& in, std::vector<int>* lines) {
  std::vector<Point> pts;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto t = tokens(strip_comment(raw));
    if (t.empty()) continue;
    if (t.size() != 2) parse_fail(line, "expected 'x y'");
    pts.push_back({number(t[0], line), number(t[1], line)});
    if (lines) lines->push_back(line);
  }
  return pts;
}

}  // namespace

std::vector<Point> parse_polygon(std::istream& in) {
  return parse_polygon_lines(in, nullptr);
}

LoadedPolygon load_polygon(std::istream& in) {
  std::vector<int> lines;
  std::vector<Point> pts = parse_polygon_lines(in, &lines);
  try {
    return load_polygon(std::move(pts));
  } catch (const GeometryError& e) {
    if (e.vertices().empty()) throw;
    std::string where = "line";
    if (e.vertices().size() > 1) where += 's';
    for (std::size_t k = 0; k < e.vertices().size(); ++k)
      where += (k ? ", " : " ") + std::to_string(lines[e.vertices()[k]]);
    throw GeometryError(e.code(), where + ": " + e.what(), e.vertices());
  }
}

LoadedPolygon load_polygon_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_polygon(in);
}

std::vector<Point> read_polygon_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_polygon(in);
}

void write_polygon(std::ostream& out, const std::vector<Point>& pts) {
  for (const Point& p : pts)
    out << format_double(p.x) << ' ' << format_double(p.y) << '\n';
}

namespace {

std::vector<QueryLine> parse_query_lines(std::istream& in, bool targets) {
  std::vector<QueryLine> qs;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto t = tokens(strip_comment(raw));
    if (t.empty()) continue;
    QueryLine q;
    q.line = line;
    if (t[0] == "p" && t.size() == 5) {
      q.kind = QueryLine::point;
      q.s = {number(t[1], line), number(t[2], line)};
      q.t = {number(t[3], line), number(t[4], line)};
    } else if (t[0] == "v" && t.size() == 3) {
      q.kind = QueryLine::vertex;
      q.i = index(t[1], line);
      q.j = index(t[2], line);
    } else if (targets && t[0] == "p" && t.size() == 3) {
      q.kind = QueryLine::point;
      q.t = {number(t[1], line), number(t[2], line)};
    } else if (targets && t[0] == "v" && t.size() == 2) {
      q.kind = QueryLine::vertex;
      q.j = index(t[1], line);
    } else {
      parse_fail(line, targets ? "expected 'p x y' or 'v i'"
                               : "expected 'p sx sy tx ty' or 'v i j'");
    }
    qs.push_back(q);
  }
  return qs;
}

}  // namespace

std::vector<QueryLine> parse_queries(std::istream& in) {
  return parse_query_lines(in, false);
}

std::vector<QueryLine> parse_targets(std::istream& in) {
  return parse_query_lines(in, true);
}

std::vector<QueryLine> read_target_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_targets(in);
}

std::vector<QueryLine> read_query_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_queries(in);
}

LoadedPolygon load_polygon(std::vector<Point> raw) {
  LoadedPolygon lp;
  lp.reversed = raw.size() >= 3 && signed_area(raw) < 0;
  lp.poly = validate_polygon(std::move(raw));
  return lp;
}

// ---------------------------------------------------------------- snapshot

namespace {

class Writer {
 public:
  template <class T>
  void put(T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    buf_.append(b, sizeof(T));
  }
  void put(Point p) {
    put(p.x);
    put(p.y);
  }
  void size(std::size_t n) { put(static_cast<std::uint64_t>(n)); }
  void flag(bool b) { put(static_cast<std::uint8_t>(b)); }
  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}
  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  Point point() {
    const double x = get<double>();
    return {x, get<double>()};
  }
  // Element count, bounded by the bytes left so corrupt input cannot ask
  // for huge allocations.
  std::size_t count(std::size_t min_bytes_each) {
    const auto n = get<std::uint64_t>();
    if (min_bytes_each && n > (data_.size() - pos_) / min_bytes_each)
      fail("count exceeds section size");
    return static_cast<std::size_t>(n);
  }
  int id(int hi) {
    const auto v = get<std::int32_t>();
    if (v < -1 || v >= hi) fail("index out of range");
    return v;
  }
  bool flag() { return get<std::uint8_t>() != 0; }
  bool done() const { return pos_ == data_.size(); }
  [[noreturn]] static void fail(const std::string& msg) {
    throw GeometryError(ErrorCode::parse_error, "snapshot: " + msg);
  }

 private:
  void need(std::size_t k) {
    if (data_.size() - pos_ < k) fail("truncated");
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'L', '1', 'S', 'P'};

void section(std::ostream& out, const char (&tag)[5], const std::string& body) {
  out.write(tag, 4);
  const auto n = static_cast<std::uint64_t>(body.size());
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
}

}  // namespace

void save_snapshot(std::ostream& out, const QueryEngine& engine, bool reversed) {
  const MountainForest& f = engine.forest();
  const Polygon& poly = f.polygon();

  out.write(kMagic, 4);
  const std::uint32_t head[2] = {kSnapshotVersion, reversed ? 1u : 0u};
  out.write(reinterpret_cast<const char*>(head), sizeof head);

  Writer w;
  w.size(poly.size());
  for (const Point& p : poly.vertices()) w.put(p);
  section(out, "POLY", w.take());

  w.put(f.chord().seg.a);
  w.put(f.chord().seg.b);
  w.flag(f.source().has_value());
  w.put(f.source().value_or(Point{}));
  section(out, "CHRD", w.take());

  w.size(f.size());
  for (const MountainCell& c : f.cells()) {
    w.put(static_cast<std::int32_t>(c.side));
    w.put(static_cast<std::int32_t>(c.rot));
    w.put(static_cast<std::int32_t>(c.window_edge));
    w.flag(c.left_wing);
    w.flag(c.right_wing);
    w.size(c.boundary.size());
    for (std::size_t k = 0; k < c.boundary.size(); ++k) {
      w.put(c.boundary[k]);
      w.put(static_cast<std::int32_t>(c.vertex_ids[k]));
    }
  }
  section(out, "CELL", w.take());

  w.size(f.size());
  for (const MountainCell& c : f.cells()) w.put(static_cast<std::int32_t>(c.parent));
  section(out, "TREE", w.take());

  w.size(f.size());
  for (const MountainCell& c : f.cells()) {
    w.put(c.anchor);
    w.put(static_cast<std::int32_t>(c.anchor_vertex));
    w.put(c.tau);
    w.put(c.eps);
    // Extended-precision sum kept exactly as a double pair.
    const double hi = static_cast<double>(c.dist_tau_eps);
    w.put(hi);
    w.put(static_cast<double>(c.dist_tau_eps - hi));
    w.put(static_cast<std::int32_t>(c.tau_slot));
    w.size(c.assoc.size());
    for (const AssocPoint& a : c.assoc) {
      w.put(a.p);
      w.put(static_cast<std::int32_t>(a.trap));
    }
  }
  w.size(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const VertexAssoc& a = f.vertex(i);
    for (int v : {a.cell, a.trap, a.alt_cell, a.alt_trap, a.proj_slot})
      w.put(static_cast<std::int32_t>(v));
  }
  section(out, "ANNO", w.take());

  w.put(engine.locator_seed());
  section(out, "LOCS", w.take());
  if (!out) throw GeometryError(ErrorCode::io_error, "snapshot write failed");
}

void save_snapshot(const std::filesystem::path& path, const QueryEngine& engine,
                   bool reversed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GeometryError(ErrorCode::io_error, "cannot write " + path.string());
  save_snapshot(out, engine, reversed);
}

Snapshot load_snapshot(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string data = ss.str();
  Reader hdr(data);
  if (data.size() < 12 || std::memcmp(data.data(), kMagic, 4) != 0)
    Reader::fail("bad magic");
  hdr.get<std::uint32_t>();
  const auto version = hdr.get<std::uint32_t>();
  const auto flags = hdr.get<std::uint32_t>();
  if (version != kSnapshotVersion)
    Reader::fail("unsupported version " + std::to_string(version));

  std::vector<std::pair<std::string, std::string_view>> secs;
  std::size_t pos = 12;
  while (pos < data.size()) {
    if (data.size() - pos < 12) Reader::fail("truncated section header");
    std::string tag = data.substr(pos, 4);
    std::uint64_t len;
    std::memcpy(&len, data.data() + pos + 4, 8);
    pos += 12;
    if (len > data.size() - pos) Reader::fail("truncated section " + tag);
    secs.emplace_back(std::move(tag), std::string_view(data).substr(pos, len));
    pos += len;
  }
  auto body = [&](const char* tag) {
    for (const auto& [t, b] : secs)
      if (t == tag) return Reader(b);
    Reader::fail(std::string("missing section ") + tag);
  };

  Reader r = body("POLY");
  std::vector<Point> pts(r.count(16));
  for (Point& p : pts) p = r.point();
  if (pts.size() < 3) Reader::fail("polygon too small");
  const int n = static_cast<int>(pts.size());
  Polygon poly = Polygon::from_trusted(std::move(pts));

  r = body("CHRD");
  Chord chord;
  chord.seg.a = r.point();
  chord.seg.b = r.point();
  const bool has_source = r.flag();
  const Point src = r.point();

  r = body("CELL");
  std::vector<MountainCell> cells(r.count(14));
  const int m = static_cast<int>(cells.size());
  for (MountainCell& c : cells) {
    c.side = r.get<std::int32_t>();
    c.rot = r.get<std::int32_t>();
    c.window_edge = r.get<std::int32_t>();
    c.left_wing = r.flag();
    c.right_wing = r.flag();
    if ((c.side != 1 && c.side != 2) || c.rot < 0 || c.rot > 3)
      Reader::fail("bad cell header");
    const std::size_t k = r.count(20);
    if (k < 3) Reader::fail("degenerate cell");
    c.boundary.resize(k);
    c.vertex_ids.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      c.boundary[i] = r.point();
      c.vertex_ids[i] = r.id(n);
    }
  }

  r = body("TREE");
  if (r.count(4) != cells.size()) Reader::fail("tree size mismatch");
  for (MountainCell& c : cells) c.parent = r.id(m);
  for (const MountainCell& c : cells)
    if (c.parent >= 0 && (c.window_edge < 0 ||
                          c.window_edge >= static_cast<int>(cells[c.parent].boundary.size())))
      Reader::fail("bad window edge");

  r = body("ANNO");
  if (r.count(60) != cells.size()) Reader::fail("annotation size mismatch");
  for (MountainCell& c : cells) {
    c.anchor = r.point();
    c.anchor_vertex = r.id(n);
    c.tau = r.point();
    c.eps = r.point();
    const double hi = r.get<double>();
    c.dist_tau_eps = static_cast<long double>(hi) + r.get<double>();
    const std::int32_t slot = r.get<std::int32_t>();
    c.assoc.resize(r.count(20));
    for (AssocPoint& a : c.assoc) {
      a.p = r.point();
      a.trap = r.get<std::int32_t>();
    }
    c.tau_slot = slot;
  }
  std::vector<VertexAssoc> va(r.count(20));
  if (static_cast<int>(va.size()) != n) Reader::fail("vertex table size mismatch");
  for (VertexAssoc& a : va) {
    a.cell = r.id(m);
    a.trap = r.get<std::int32_t>();
    a.alt_cell = r.id(m);
    a.alt_trap = r.get<std::int32_t>();
    a.proj_slot = r.get<std::int32_t>();
    if (a.cell < 0) Reader::fail("vertex without cell");
  }

  r = body("LOCS");
  const auto seed = r.get<std::uint64_t>();

  MountainForest f = MountainForest::assemble(
      std::move(poly), chord, has_source ? std::optional<Point>(src) : std::nullopt,
      std::move(cells), std::move(va));
  // Trapezoid and slot references index structures rebuilt just now.
  for (const MountainCell& c : f.cells()) {
    if (c.parent >= 0) {
      const MountainCell& par = f.cell(c.parent);
      if (c.tau_slot < -1 ||
          (par.parent >= 0 && c.tau_slot >= static_cast<int>(par.assoc.size())))
        Reader::fail("bad parent slot");
      for (const AssocPoint& a : c.assoc)
        if (a.trap < 0 || a.trap >= static_cast<int>(par.trap.size()))
          Reader::fail("bad association trapezoid");
    } else if (!c.assoc.empty()) {
      Reader::fail("root with associations");
    }
  }
  for (int i = 0; i < n; ++i) {
    const VertexAssoc& a = f.vertex(i);
    const MountainCell& c = f.cell(a.cell);
    if (a.trap < 0 || a.trap >= static_cast<int>(c.trap.size()) ||
        a.proj_slot < -1 || a.proj_slot >= static_cast<int>(c.assoc.size()))
      Reader::fail("bad vertex association");
    if (a.alt_cell >= 0 &&
        (a.alt_trap < 0 || a.alt_trap >= static_cast<int>(f.cell(a.alt_cell).trap.size())))
      Reader::fail("bad vertex association");
  }
  if (f.roots(1).empty() || f.roots(2).empty()) Reader::fail("missing root cell");
  return {QueryEngine(std::move(f), seed), (flags & 1u) != 0};
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  return load_snapshot(in);
}

// --------------------------------------------------------------------- svg

namespace {

const char* kStyle =
    ".poly{fill:none;stroke:#222;stroke-width:1.6}"
    ".cell{stroke:#666;stroke-width:0.8}"
    ".d0{fill:#fbe3e8}.d1{fill:#dde8fb}.d2{fill:#e1f2d5}"
    ".d3{fill:#fdf1c9}.d4{fill:#e9e0f5}.d5{fill:#d3eeea}"
    ".trap{fill:none;stroke:#888;stroke-width:0.4;stroke-opacity:0.45}"
    ".window{stroke:#b03a2e;stroke-width:1.1;stroke-dasharray:5 3}"
    ".chord{stroke:#1f5fa8;stroke-width:1.6}"
    ".path{fill:none;stroke:#000;stroke-width:3;stroke-linejoin:round}"
    "*{vector-effect:non-scaling-stroke}";

std::string pts_attr(const std::vector<Point>& pts) {
  std::string s;
  for (const Point& p : pts) {
    if (!s.empty()) s += ' ';
    s += format_double(p.x) + ',' + format_double(-p.y);
  }
  return s;
}

void line(std::ostream& o, const char* cls, Point a, Point b) {
  o << "<line class=\"" << cls << "\" x1=\"" << format_double(a.x) << "\" y1=\""
    << format_double(-a.y) << "\" x2=\"" << format_double(b.x) << "\" y2=\""
    << format_double(-b.y) << "\"/>\n";
}

}  // namespace

std::string render_svg(const MountainForest& forest, const Polyline* path) {
  const Polygon& poly = forest.polygon();
  double x0 = poly[0].x, x1 = x0, y0 = poly[0].y, y1 = y0;
  for (const Point& p : poly.vertices()) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double pad = 0.03 * std::max(x1 - x0, y1 - y0);
  const double w = x1 - x0 + 2 * pad, h = y1 - y0 + 2 * pad;
  const double px = 900, py = std::max(1.0, std::round(900 * h / w));

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px
    << "\" height=\"" << py << "\" viewBox=\"" << format_double(x0 - pad) << ' '
    << format_double(-y1 - pad) << ' ' << format_double(w) << ' ' << format_double(h)
    << "\">\n<style>" << kStyle << "</style>\n";

  o << "<g id=\"cells\">\n";
  for (const MountainCell& c : forest.cells())
    o << "<polygon class=\"cell d" << c.depth % 6 << "\" points=\""
      << pts_attr(c.boundary) << "\"/>\n";
  o << "</g>\n<g id=\"trapezoids\">\n";
  for (const MountainCell& c : forest.cells())
    for (int t = 0; t < static_cast<int>(c.trap.size()); ++t) {
      std::vector<Point> q = c.trap.corners(t);
      for (Point& p : q) p = c.to_world(p);
      o << "<polygon class=\"trap\" points=\"" << pts_attr(q) << "\"/>\n";
    }
  o << "</g>\n<g id=\"windows\">\n";
  for (const MountainCell& c : forest.cells())
    if (c.parent >= 0) line(o, "window", c.boundary[0], c.boundary[1]);
  o << "</g>\n";
  line(o, "chord", forest.chord().seg.a, forest.chord().seg.b);
  o << "<polygon class=\"poly\" points=\"" << pts_attr(poly.vertices()) << "\"/>\n";
  if (path)
    o << "<polyline class=\"path\" points=\"" << pts_attr(path->points()) << "\"/>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace l1sp
