#pragma once

// Text formats, engine snapshots and SVG rendering.
//
// Polygon file: one "x y" pair per line, '#' starts a comment, blank lines
// ignored; either orientation. Query file: "p sx sy tx ty" (points) or
// "v i j" (vertex indexes into the polygon file as written).
//
// Snapshot: little-endian, "L1SP" magic, format version, flags, then
// length-prefixed tagged sections POLY, CHRD, CELL, TREE, ANNO, LOCS. The
// locator is rebuilt from its stored seed on load.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "l1sp/geometry.hpp"
#include "l1sp/query.hpp"

namespace l1sp {

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Throws GeometryError(parse_error) with the line number.
std::vector<Point> parse_polygon(std::istream& in);
std::vector<Point> read_polygon_file(const std::filesystem::path& path);
void write_polygon(std::ostream& out, const std::vector<Point>& pts);

struct QueryLine {
  enum Kind { point, vertex } kind = point;
  Point s, t;
  std::size_t i = 0, j = 0;
  int line = 0;
};

std::vector<QueryLine> parse_queries(std::istream& in);
std::vector<QueryLine> read_query_file(const std::filesystem::path& path);

/// The polygon as given plus the validated (CCW) form. `reversed` is set
/// when the input was clockwise, in which case file index i is polygon
/// index n-1-i.
struct LoadedPolygon {
  Polygon poly;
  bool reversed = false;
  std::size_t to_internal(std::size_t i) const {
    return reversed ? poly.size() - 1 - i : i;
  }
};

LoadedPolygon load_polygon(std::vector<Point> raw);
/// Parses and validates; validation errors name the offending lines.
LoadedPolygon load_polygon(std::istream& in);
LoadedPolygon load_polygon_file(const std::filesystem::path& path);

/// Target file for single-source queries: "p x y" or "v i". Lines in the
/// two-point format are accepted too; their second point (or index) is the
/// target.
std::vector<QueryLine> parse_targets(std::istream& in);
std::vector<QueryLine> read_target_file(const std::filesystem::path& path);

struct Snapshot {
  QueryEngine engine;
  bool reversed = false;
};

void save_snapshot(std::ostream& out, const QueryEngine& engine, bool reversed);
void save_snapshot(const std::filesystem::path& path, const QueryEngine& engine,
                   bool reversed);
/// Throws GeometryError(parse_error) on malformed data, io_error when the
/// file cannot be read.
Snapshot load_snapshot(std::istream& in);
Snapshot load_snapshot(const std::filesystem::path& path);

/// Polygon, chord, cells filled by depth, windows dashed, trapezoid sides
/// faint, and an optional path drawn bold.
std::string render_svg(const MountainForest& forest,
                       const Polyline* path = nullptr);

}  // namespace l1sp
