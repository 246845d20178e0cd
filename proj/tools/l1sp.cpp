// l1sp: build, query and inspect L1 shortest-path structures.
//
// Exit codes: 0 ok, 2 parse/validation error, 3 oracle mismatch, 4 I/O.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "l1sp/io.hpp"
#include "l1sp/oracle.hpp"
#include "l1sp/query.hpp"
#include "l1sp/spm.hpp"

using namespace l1sp;

namespace {

constexpr int kOk = 0, kInvalid = 2, kMismatch = 3, kIo = 4;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Point parse_point(const std::string& s, const char* what) {
  std::istringstream in(s);
  Point p;
  std::string rest;
  if (!(in >> p.x >> p.y) || (in >> rest))
    throw GeometryError(ErrorCode::parse_error,
                        std::string("bad ") + what + " '" + s + "'");
  return p;
}

bool integral(Point p) {
  return std::floor(p.x) == p.x && std::floor(p.y) == p.y;
}

std::string path_text(const Polyline& path) {
  std::string s = " path";
  for (const Point& p : path.points())
    s += ' ' + format_double(p.x) + ' ' + format_double(p.y);
  return s;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw GeometryError(ErrorCode::io_error, "cannot write " + path);
  return out;
}

// Deterministic offset of at most 1e-6 of the bounding box per coordinate.
std::vector<Point> perturb(std::vector<Point> pts, std::uint64_t seed) {
  double x0 = pts[0].x, x1 = x0, y0 = pts[0].y, y1 = y0;
  for (const Point& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double r = 1e-6 * std::max(x1 - x0, y1 - y0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-r, r);
  for (Point& p : pts) {
    p.x += u(rng);
    p.y += u(rng);
  }
  return pts;
}

int cmd_gen(std::size_t n, std::uint64_t seed, const std::string& kind,
            const std::string& out_path) {
  const bool star = kind == "star" || (kind == "auto" && n > 2000);
  const Polygon p = star ? generate_star_polygon(n, seed) : generate_polygon(n, seed);
  auto out = open_out(out_path);
  out << "# n " << n << " seed " << seed << (star ? " star" : "") << '\n';
  write_polygon(out, p.vertices());
  return kOk;
}

int cmd_build(const std::string& poly_path, std::optional<std::uint64_t> perturb_seed,
              const std::string& out_path) {
  LoadedPolygon lp;
  if (perturb_seed) {
    lp = load_polygon(perturb(read_polygon_file(poly_path), *perturb_seed));
  } else {
    lp = load_polygon_file(poly_path);
  }
  const auto t0 = Clock::now();
  const QueryEngine e(lp.poly);
  const double ms = ms_since(t0);
  save_snapshot(std::filesystem::path(out_path), e, lp.reversed);
  std::cout << "n " << lp.poly.size() << "\ncells " << e.forest().size()
            << "\nbuild_ms " << format_double(std::round(ms * 1000) / 1000) << '\n';
  return kOk;
}

int cmd_query(const std::string& snap_path, const std::string& q_path, bool paths,
              bool check) {
  const Snapshot snap = load_snapshot(std::filesystem::path(snap_path));
  const QueryEngine& e = snap.engine;
  const auto qs = read_query_file(q_path);
  const Polygon& poly = e.polygon();
  auto vertex = [&](std::size_t i, int line) {
    if (i >= poly.size())
      throw GeometryError(ErrorCode::index_out_of_range,
                          "line " + std::to_string(line) + ": vertex index " +
                              std::to_string(i) + " out of range");
    return snap.reversed ? poly.size() - 1 - i : i;
  };
  std::optional<VisibilityOracle> oracle;
  if (check) oracle.emplace(poly);
  int status = kOk;
  for (const QueryLine& q : qs) {
    double d;
    Point s, t;
    Polyline path;
    if (q.kind == QueryLine::vertex) {
      const std::size_t i = vertex(q.i, q.line), j = vertex(q.j, q.line);
      s = poly[i];
      t = poly[j];
      d = e.query_vertices(i, j);
      if (paths) path = e.query_vertex_path(i, j);
    } else {
      s = q.s;
      t = q.t;
      d = e.query_distance(s, t);
      if (paths) path = e.query_path(s, t);
    }
    std::cout << format_double(d);
    if (paths) std::cout << path_text(path);
    if (oracle) {
      const double want = oracle->distance(s, t);
      const bool ok = integral(s) && integral(t)
                          ? d == want
                          : std::fabs(d - want) <= 1e-9 * std::max(1.0, want);
      if (!ok) {
        std::cout << " MISMATCH oracle=" << format_double(want);
        status = kMismatch;
      }
    }
    std::cout << '\n';
  }
  return status;
}

int cmd_spm(const std::string& poly_path, const std::string& source,
            const std::string& q_path, bool paths) {
  const LoadedPolygon lp = load_polygon_file(poly_path);
  const Point s = parse_point(source, "source");
  const auto qs = read_target_file(q_path);
  const ShortestPathMap m(lp.poly, s);
  for (const QueryLine& q : qs) {
    Point t = q.t;
    double d;
    if (q.kind == QueryLine::vertex) {
      if (q.j >= lp.poly.size())
        throw GeometryError(ErrorCode::index_out_of_range,
                            "line " + std::to_string(q.line) + ": vertex index " +
                                std::to_string(q.j) + " out of range");
      const std::size_t j = lp.to_internal(q.j);
      t = lp.poly[j];
      d = m.vertex_distance(j);
    } else {
      d = m.distance(t);
    }
    std::cout << format_double(d);
    if (paths) std::cout << path_text(m.path(t).reversed());
    std::cout << '\n';
  }
  return kOk;
}

int cmd_oracle(const std::string& poly_path, const std::string& q_path) {
  const LoadedPolygon lp = load_polygon_file(poly_path);
  const auto qs = read_query_file(q_path);
  const VisibilityOracle o(lp.poly);
  for (const QueryLine& q : qs) {
    double d;
    if (q.kind == QueryLine::vertex) {
      if (q.i >= lp.poly.size() || q.j >= lp.poly.size())
        throw GeometryError(ErrorCode::index_out_of_range,
                            "line " + std::to_string(q.line) + ": vertex index out of range");
      d = o.vertex_distance(lp.to_internal(q.i), lp.to_internal(q.j));
    } else {
      d = o.distance(q.s, q.t);
    }
    std::cout << format_double(d) << '\n';
  }
  return kOk;
}

int cmd_svg(const std::string& snap_path, const std::string& path_spec,
            const std::string& out_path) {
  const Snapshot snap = load_snapshot(std::filesystem::path(snap_path));
  std::optional<Polyline> path;
  if (!path_spec.empty()) {
    std::istringstream in(path_spec);
    Point s, t;
    std::string rest;
    if (!(in >> s.x >> s.y >> t.x >> t.y) || (in >> rest))
      throw GeometryError(ErrorCode::parse_error, "bad --path '" + path_spec + "'");
    path = snap.engine.query_path(s, t);
  }
  auto out = open_out(out_path);
  out << render_svg(snap.engine.forest(), path ? &*path : nullptr);
  return kOk;
}

int cmd_bench(const std::string& poly_path, std::size_t pairs, const std::string& mode,
              std::uint64_t seed) {
  const LoadedPolygon lp = load_polygon_file(poly_path);
  const Polygon& poly = lp.poly;
  auto t0 = Clock::now();
  const QueryEngine e(poly);
  const double build_ms = ms_since(t0);

  std::uint64_t state = seed;
  std::vector<std::pair<Point, Point>> pts;
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (std::size_t k = 0; k < pairs; ++k) {
    if (mode == "point") {
      const Point a = random_interior_point(poly, state, false);
      pts.emplace_back(a, random_interior_point(poly, state, false));
    } else {
      const std::size_t i = splitmix64(state) % poly.size();
      idx.emplace_back(i, splitmix64(state) % poly.size());
    }
  }
  std::vector<double> ns(pairs);
  double sink = 0;
  const auto ops0 = locator_ops().load();
  for (std::size_t k = 0; k < pairs; ++k) {
    t0 = Clock::now();
    sink += mode == "point" ? e.query_distance(pts[k].first, pts[k].second)
                            : e.query_vertices(idx[k].first, idx[k].second);
    ns[k] = std::chrono::duration<double, std::nano>(Clock::now() - t0).count();
  }
  const auto ops = locator_ops().load() - ops0;
  std::vector<double> sorted = ns;
  std::sort(sorted.begin(), sorted.end());
  double mean = 0;
  for (double v : ns) mean += v;
  mean /= std::max<std::size_t>(1, pairs);
  auto pct = [&](double q) {
    return sorted.empty() ? 0.0
                          : sorted[std::min(sorted.size() - 1,
                                            static_cast<std::size_t>(q * sorted.size()))];
  };
  auto us = [](double v) { return format_double(std::round(v) / 1000); };
  std::cout << "n " << poly.size() << "\ncells " << e.forest().size() << "\nbuild_ms "
            << format_double(std::round(build_ms * 1000) / 1000) << "\nmode " << mode
            << "\npairs " << pairs << "\nmean_us " << us(mean) << "\nmedian_us "
            << us(pct(0.5)) << "\np99_us " << us(pct(0.99)) << "\nlocator_ops " << ops
            << "\nlocator_ops_per_query "
            << format_double(pairs ? static_cast<double>(ops) / pairs : 0.0) << '\n';
  if (!std::isfinite(sink)) std::cerr << "non-finite distance\n";
  return kOk;
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::io_error:
      return kIo;
    default:
      return kInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L1 shortest paths in simple polygons"};
  app.require_subcommand(1);

  std::string poly_path, out_path, snap_path, q_path, source, path_spec;
  std::string kind = "auto", mode = "point";
  std::size_t n = 0, pairs = 1000;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> perturb_seed;
  bool paths = false, check = false;

  auto* gen = app.add_subcommand("gen", "write a random simple polygon");
  gen->add_option("--n", n, "vertex count")->required()->check(CLI::Range(3, 100000000));
  gen->add_option("--seed", seed, "generator seed")->required();
  gen->add_option("--kind", kind, "untangled, star, or auto (star above 2000)")
      ->check(CLI::IsMember({"auto", "untangled", "star"}));
  gen->add_option("--out", out_path, "polygon file")->required();

  auto* build = app.add_subcommand("build", "build and save a query structure");
  build->add_option("--polygon", poly_path)->required();
  build->add_option("--perturb", perturb_seed,
                    "seeded offsets up to 1e-6 of the bounding box before validation");
  build->add_option("--out", out_path, "snapshot file")->required();

  auto* query = app.add_subcommand("query", "answer queries from a snapshot");
  query->add_option("--snapshot", snap_path)->required();
  query->add_option("--queries", q_path)->required();
  query->add_flag("--paths", paths, "print path vertices");
  query->add_flag("--check-oracle", check, "compare with the visibility-graph oracle");

  auto* spm = app.add_subcommand("spm", "single-source distances");
  spm->add_option("--polygon", poly_path)->required();
  spm->add_option("--source", source, "\"x y\"")->required();
  spm->add_option("--queries", q_path, "targets: 'p x y' or 'v i'")->required();
  spm->add_flag("--paths", paths, "print paths from the source");

  auto* oracle = app.add_subcommand("oracle", "ground-truth distances");
  oracle->add_option("--polygon", poly_path)->required();
  oracle->add_option("--queries", q_path)->required();

  auto* svg = app.add_subcommand("svg", "draw the decomposition");
  svg->add_option("--snapshot", snap_path)->required();
  svg->add_option("--path", path_spec, "\"sx sy tx ty\"");
  svg->add_option("--out", out_path)->required();

  auto* bench = app.add_subcommand("bench", "query latency");
  bench->add_option("--polygon", poly_path)->required();
  bench->add_option("--pairs", pairs)->required();
  bench->add_option("--mode", mode)->required()->check(CLI::IsMember({"point", "vertex"}));
  bench->add_option("--seed", seed, "query sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*gen) return cmd_gen(n, seed, kind, out_path);
    if (*build) return cmd_build(poly_path, perturb_seed, out_path);
    if (*query) return cmd_query(snap_path, q_path, paths, check);
    if (*spm) return cmd_spm(poly_path, source, q_path, paths);
    if (*oracle) return cmd_oracle(poly_path, q_path);
    if (*svg) return cmd_svg(snap_path, path_spec, out_path);
    if (*bench) return cmd_bench(poly_path, pairs, mode, seed);
  } catch (const GeometryError& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
