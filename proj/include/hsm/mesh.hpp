#pragma once

// Job configuration, sampling of tiles, mesh assembly with singular overlays,
// and ASCII OBJ / PLY export with matching readers.

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hsm/frontmap.hpp"
#include "hsm/singular.hpp"
#include "hsm/tiling.hpp"

namespace hsm {

enum class Chart { Ball, UpperHalfSpace };
enum class MeshFormat { Obj, Ply };

struct MeshTolerances {
  double margin = 1e-3;        // Poincare-disk distance kept from the cusps (Fuchsian)
  double ramification = 1e-3;  // chordal distance kept from the triangle corners
  double near_singular = 5e-2;  // flag vertices with ||q| - 1| below this
  double on_curve = 1e-6;      // polyline points must reproduce their x to this
};

struct JobConfig {
  std::string case_name = "dihedral:3";
  int tiles = 0;  // 0: whole group for finite cases, {e, 1} for the Fuchsian case
  std::vector<std::string> words;
  int resolution = 16;
  Chart chart = Chart::Ball;
  MeshFormat format = MeshFormat::Obj;
  std::string out;
  bool polylines = true;
  bool self_intersection = true;
  MeshTolerances tol;
};

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    const auto a = cur.find_first_not_of(" \t"), b = cur.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(cur.substr(a, b - a + 1));
  }
  return out;
}

namespace detail {

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: " + key + " expects a boolean, got '" + v + "'");
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument("config: " + key + " expects a number, got '" + v + "'");
  return d;
}

inline int parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw std::invalid_argument("config: " + key + " expects an integer, got '" + v + "'");
  return n;
}

}  // namespace detail

/// Sets one key; the same names are used in config files and by the CLI.
inline void apply_setting(JobConfig& c, const std::string& key, const std::string& value) {
  if (key == "case") {
    c.case_name = value;
  } else if (key == "tiles") {
    c.tiles = detail::parse_int(key, value);
  } else if (key == "words") {
    c.words = split_list(value);
  } else if (key == "resolution") {
    c.resolution = detail::parse_int(key, value);
  } else if (key == "chart") {
    if (value == "ball")
      c.chart = Chart::Ball;
    else if (value == "uhs")
      c.chart = Chart::UpperHalfSpace;
    else
      throw std::invalid_argument("config: chart must be ball or uhs");
  } else if (key == "format") {
    if (value == "obj")
      c.format = MeshFormat::Obj;
    else if (value == "ply")
      c.format = MeshFormat::Ply;
    else
      throw std::invalid_argument("config: format must be obj or ply");
  } else if (key == "out") {
    c.out = value;
  } else if (key == "polylines") {
    c.polylines = detail::parse_bool(key, value);
  } else if (key == "self_intersection") {
    c.self_intersection = detail::parse_bool(key, value);
  } else if (key == "tol.margin") {
    c.tol.margin = detail::parse_double(key, value);
  } else if (key == "tol.ramification") {
    c.tol.ramification = detail::parse_double(key, value);
  } else if (key == "tol.near_singular") {
    c.tol.near_singular = detail::parse_double(key, value);
  } else if (key == "tol.on_curve") {
    c.tol.on_curve = detail::parse_double(key, value);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

/// Flat key=value text; '#' starts a comment.
inline JobConfig parse_config(const std::string& text, JobConfig c = {}) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(n) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

inline JobConfig load_config(const std::string& path, JobConfig c = {}) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), c);
}

// ---------------------------------------------------------------------------
// Sampling

struct GridNode {
  int i, j;         // u = i/R, v = j/R
  Complex z_base;   // point of the base triangle
  Complex z;        // its image in the tile
};

struct TriangleSample {
  int resolution = 0;
  std::vector<GridNode> nodes;
  std::vector<int> index;  // (i-1)*(R+1) + j -> node or -1
  int dropped = 0;
  std::vector<std::string> diagnostics;

  int at(int i, int j) const {
    if (i < 1 || i > resolution || j < 0 || j > resolution) return -1;
    return index[(i - 1) * (resolution + 1) + j];
  }
};

namespace detail {

/// Cayley map of the upper half-plane onto the disk, cusps 0, 1, inf to -1, -i, 1.
inline Complex cayley(Complex z) { return (z - I) / (z + I); }

}  // namespace detail

/// Structured (u, v) grid of the tile g(T), u = 1/R..1, v = 0..1. Nodes near
/// the triangle corners (and, for the zero-angle triangle, near the boundary
/// circle) are dropped.
inline TriangleSample sample_triangle(const BaseTriangle& base, const MobiusMap& g, int resolution,
                                      const MeshTolerances& tol = {}) {
  if (resolution < 8) throw std::invalid_argument("sample_triangle: resolution must be at least 8");
  TriangleSample s;
  s.resolution = resolution;
  s.index.assign(static_cast<std::size_t>(resolution) * (resolution + 1), -1);
  int near_corner = 0, near_boundary = 0;
  for (int i = 1; i <= resolution; ++i)
    for (int j = 0; j <= resolution; ++j) {
      const Complex zb = base.fan_point(static_cast<double>(i) / resolution, static_cast<double>(j) / resolution);
      bool drop = false;
      for (Complex v : base.vertices())
        if (chordal_distance(zb, v) < tol.ramification) drop = true;
      if (drop) {
        ++near_corner;
        continue;
      }
      if (base.kind() == BaseTriangle::Kind::Fuchsian && std::abs(detail::cayley(zb)) >= 1.0 - tol.margin) {
        ++near_boundary;
        continue;
      }
      s.index[(i - 1) * (resolution + 1) + j] = static_cast<int>(s.nodes.size());
      s.nodes.push_back({i, j, zb, g(zb)});
    }
  s.dropped = near_corner + near_boundary;
  if (near_corner) s.diagnostics.push_back(std::to_string(near_corner) + " nodes within " + std::to_string(tol.ramification) + " of a corner");
  if (near_boundary) s.diagnostics.push_back(std::to_string(near_boundary) + " nodes within " + std::to_string(tol.margin) + " of the boundary circle");
  if (s.nodes.empty()) {
    std::string msg = "sample_triangle: no grid points left after clipping";
    for (const auto& d : s.diagnostics) msg += "; " + d;
    throw std::domain_error(msg);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Mesh

enum class CurveKind { Surface = 0, CuspidalEdge = 1, SelfIntersection = 2, Swallowtail = 3 };

struct MeshVertex {
  std::array<double, 3> p{};
  Complex z, x;
  int tile = -1;
  bool near_singular = false;
  bool clipped = false;
  CurveKind curve = CurveKind::Surface;
};

struct Polyline {
  CurveKind kind = CurveKind::CuspidalEdge;
  int tile = -1;
  std::vector<int> points;
};

struct SurfaceMesh {
  std::string case_name;
  Chart chart = Chart::Ball;
  std::vector<MeshVertex> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Polyline> polylines;
  std::vector<int> markers;  // swallowtail images
  std::vector<std::string> tile_words;
  std::vector<MobiusMap> tile_maps;
  std::vector<std::string> diagnostics;
  // per tile: vertex index of each grid node (same layout as TriangleSample::index)
  std::vector<std::vector<int>> node_vertex;
  int resolution = 0;
};

inline std::array<double, 3> chart_coordinates(const HermitianForm& H, Chart c) {
  if (c == Chart::Ball) {
    const Ball b = lorentz_to_ball(hermitian_to_lorentz(H)).as_ball();
    return {b.x1, b.x2, b.x3};
  }
  const UpperHalfSpace u = hermitian_to_upper_half_space(H).as_upper_half_space();
  return {u.z.real(), u.z.imag(), u.t};
}

inline Tiling job_tiles(const JobConfig& cfg, const BaseTriangle& base) {
  if (!cfg.words.empty()) return tiles_from_words(base, cfg.words);
  if (cfg.tiles < 0) throw std::invalid_argument("tiles must be non-negative");
  if (base.kind() == BaseTriangle::Kind::Fuchsian) {
    if (cfg.tiles == 0) return tiles_from_words(base, {"e", "1"});
    return tile_parameter_domain(base, cfg.tiles);
  }
  const Tiling all = tile_parameter_domain(base, 100000);
  if (cfg.tiles > static_cast<int>(all.tiles.size()))
    throw std::invalid_argument("tiles: " + std::to_string(cfg.tiles) + " exceeds the " +
                                std::to_string(all.tiles.size()) + " tiles of the group");
  if (cfg.tiles == 0) return all;
  Tiling t = all;
  t.tiles.resize(cfg.tiles);
  return t;
}

namespace detail {

struct TileResult {
  std::vector<MeshVertex> vertices;
  std::vector<int> node_vertex;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::string> diagnostics;
};

inline std::string point_label(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "z = %.12g%+.12gi", z.real(), z.imag());
  return buf;
}

inline TileResult build_tile(const InverseSchwarzMap& inv, const BaseTriangle& base, const Tile& tile, int tile_index,
                             const JobConfig& cfg) {
  TileResult r;
  const TriangleSample s = sample_triangle(base, tile.g, cfg.resolution, cfg.tol);
  r.diagnostics = s.diagnostics;
  r.node_vertex.assign(s.index.size(), -1);
  int failed = 0;
  for (const GridNode& n : s.nodes) {
    FrontValue f;
    try {
      f = eval_front_closed_form(inv, n.z);
    } catch (const std::domain_error&) {
      ++failed;
      continue;
    } catch (const std::exception& ex) {
      throw std::runtime_error("tile " + tile.word + ", " + point_label(n.z) + ": " + ex.what());
    }
    MeshVertex v;
    try {
      v.p = chart_coordinates(f.H, cfg.chart);
    } catch (const std::domain_error&) {
      ++failed;
      continue;
    }
    if (cfg.chart == Chart::Ball && !(std::hypot(v.p[0], v.p[1], v.p[2]) < 1.0)) {
      ++failed;
      continue;
    }
    v.z = n.z;
    v.x = f.x;
    v.tile = tile_index;
    try {
      v.near_singular = std::abs(std::abs(eval_q(inv.exponents(), f.x).q) - 1.0) < cfg.tol.near_singular;
    } catch (const std::domain_error&) {
      v.near_singular = false;
    }
    r.node_vertex[(n.i - 1) * (s.resolution + 1) + n.j] = static_cast<int>(r.vertices.size());
    r.vertices.push_back(v);
  }
  if (failed) r.diagnostics.push_back(std::to_string(failed) + " nodes where the front could not be evaluated");
  if (r.vertices.empty())
    throw std::domain_error("tile " + tile.word + ": no grid points left after clipping");

  const int R = s.resolution;
  auto at = [&](int i, int j) { return i < 1 || i > R || j < 0 || j > R ? -1 : r.node_vertex[(i - 1) * (R + 1) + j]; };
  // a vertex is clipped when one of its grid neighbours is missing
  for (int i = 1; i <= R; ++i)
    for (int j = 0; j <= R; ++j) {
      const int k = at(i, j);
      if (k < 0) continue;
      const bool inner_i = i > 1 && i < R, inner_j = j > 0 && j < R;
      bool gap = false;
      if (inner_i) gap = gap || at(i - 1, j) < 0 || at(i + 1, j) < 0;
      if (inner_j) gap = gap || at(i, j - 1) < 0 || at(i, j + 1) < 0;
      r.vertices[k].clipped = gap;
    }
  // orientation follows the tile: mirrored tiles reverse it
  for (int i = 1; i < R; ++i)
    for (int j = 0; j < R; ++j) {
      const int a = at(i, j), b = at(i + 1, j), c = at(i + 1, j + 1), d = at(i, j + 1);
      std::array<std::array<int, 3>, 2> tri{{{a, b, c}, {a, c, d}}};
      for (auto t : tri) {
        if (t[0] < 0 || t[1] < 0 || t[2] < 0) continue;
        if (tile.mirrored) std::swap(t[1], t[2]);
        r.triangles.push_back(t);
      }
    }
  return r;
}

}  // namespace detail

/// Singular curve x-samples of a case: traced components and swallowtails.
struct SingularOverlay {
  std::vector<TracedCurve> curves;
  std::vector<SingularPointClass> swallowtails;
  std::vector<std::vector<Complex>> self_intersection;  // branches in x
};

inline std::vector<SeedBox> default_seed_boxes() {
  return {SeedBox{Complex(0.3, 0.0), Complex(0.7, 0.8)}, SeedBox{Complex(-1.5, -1.5), Complex(2.5, 1.5)}};
}

/// Traces C from the default seed boxes, dropping repeats of a component.
inline SingularOverlay singular_overlay(const ExponentData& e, bool with_self_intersection,
                                        const FrontEvaluator* upper_front = nullptr) {
  SingularOverlay o;
  for (const SeedBox& b : default_seed_boxes()) {
    TracedCurve c = trace_singular_curve(e, b);
    if (c.x.empty()) continue;
    bool repeat = false;
    for (const auto& k : o.curves)
      for (Complex p : k.x) repeat = repeat || std::abs(p - c.x.front()) < 1e-3;
    if (repeat) continue;
    for (auto& s : find_swallowtails(e, c)) o.swallowtails.push_back(s);
    o.curves.push_back(std::move(c));
  }
  const bool symmetric = std::abs(e.mu0 - e.mu1) < 1e-12;
  if (with_self_intersection && symmetric && upper_front) {
    for (const auto& s : o.swallowtails) {
      if (s.x.imag() <= 0 || std::abs(s.x.real() - 0.5) > 1e-9) continue;
      const SelfIntersection si = find_self_intersection(*upper_front, 0.004, s.x.imag() - 1e-4, 48);
      if (si.levels.empty()) continue;
      // four branches: left/right in each half-plane, ordered from the real axis up
      std::array<std::vector<Complex>, 4> br;
      for (const auto& L : si.levels) {
        br[0].push_back(L.x1);
        br[1].push_back(L.x2);
        br[2].push_back(std::conj(L.x1));
        br[3].push_back(std::conj(L.x2));
      }
      for (auto& b : br) o.self_intersection.push_back(std::move(b));
    }
  }
  return o;
}

struct MeshBuildReport {
  std::size_t tiles = 0, vertices = 0, triangles = 0, polyline_points = 0;
  std::size_t lift_failures = 0;
};

namespace detail {

/// Maps x-polylines onto every tile: lift into T (or conj into T for mirrored
/// tiles), push forward by the tile map, evaluate the front.
class PolylineMapper {
 public:
  PolylineMapper(const InverseSchwarzMap& inv, const BaseTriangle& base)
      : inv_(inv), lift_(inv, base, MobiusMap::identity(), 32) {
    upper_ = inv(base.fan_point(0.5, 0.5)).x.imag() > 0;
  }

  /// z in tile for x, or nullopt when the tile does not cover x.
  std::optional<Complex> to_tile(const Tile& t, Complex x) const {
    if (std::abs(x.imag()) < 1e-12) return std::nullopt;
    const bool tile_upper = upper_ != t.mirrored;
    if ((x.imag() > 0) != tile_upper) return std::nullopt;
    const auto w = lift_.lift(t.mirrored ? std::conj(x) : x);
    if (!w) return std::nullopt;
    return t.g(*w);
  }

  const InverseSchwarzMap& inv() const { return inv_; }

 private:
  const InverseSchwarzMap& inv_;
  TileLift lift_;
  bool upper_ = true;
};

}  // namespace detail

inline SurfaceMesh build_mesh(const JobConfig& cfg, MeshBuildReport* report = nullptr) {
  if (cfg.resolution < 8) throw std::invalid_argument("resolution must be at least 8");
  const InverseSchwarzMap inv = parse_case(cfg.case_name);
  const BaseTriangle base = BaseTriangle::for_map(inv);
  const Tiling tiling = job_tiles(cfg, base);

  SurfaceMesh mesh;
  mesh.case_name = cfg.case_name;
  mesh.chart = cfg.chart;
  mesh.resolution = cfg.resolution;

  // tiles are independent; evaluate them in parallel batches
  std::vector<detail::TileResult> results(tiling.tiles.size());
  const std::size_t batch = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < tiling.tiles.size(); start += batch) {
    std::vector<std::future<detail::TileResult>> jobs;
    const std::size_t stop = std::min(tiling.tiles.size(), start + batch);
    for (std::size_t k = start; k < stop; ++k)
      jobs.push_back(std::async(std::launch::async, [&, k] {
        return detail::build_tile(inv, base, tiling.tiles[k], static_cast<int>(k), cfg);
      }));
    for (std::size_t k = start; k < stop; ++k) results[k] = jobs[k - start].get();
  }
  for (std::size_t k = 0; k < results.size(); ++k) {
    auto& r = results[k];
    const int offset = static_cast<int>(mesh.vertices.size());
    mesh.tile_words.push_back(tiling.tiles[k].word);
    mesh.tile_maps.push_back(tiling.tiles[k].g);
    for (const auto& d : r.diagnostics) mesh.diagnostics.push_back("tile " + tiling.tiles[k].word + ": " + d);
    for (auto& v : r.vertices) mesh.vertices.push_back(v);
    for (auto t : r.triangles) mesh.triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
    for (int& n : r.node_vertex)
      if (n >= 0) n += offset;
    mesh.node_vertex.push_back(std::move(r.node_vertex));
  }

  std::size_t lift_failures = 0, poly_points = 0;
  if (cfg.polylines) {
    const detail::PolylineMapper mapper(inv, base);
    const TileLift upper_lift(inv, base, upper_half_plane_tile(inv, base), 32);
    const FrontEvaluator upper = [&](Complex x) { return upper_lift.front(x).H; };
    const SingularOverlay ov = singular_overlay(inv.exponents(), cfg.self_intersection, &upper);

    auto add_point = [&](const Tile& t, int tile_index, Complex x, CurveKind kind) -> int {
      const auto z = mapper.to_tile(t, x);
      if (!z) return -1;
      try {
        const FrontValue f = eval_front_closed_form(inv, *z);
        if (std::abs(f.x - x) > cfg.tol.on_curve * (1 + std::abs(x))) {
          ++lift_failures;
          return -1;
        }
        MeshVertex v;
        v.p = chart_coordinates(f.H, cfg.chart);
        if (cfg.chart == Chart::Ball && !(std::hypot(v.p[0], v.p[1], v.p[2]) < 1.0)) return -1;
        v.z = *z;
        v.x = x;
        v.tile = tile_index;
        v.near_singular = kind != CurveKind::SelfIntersection;
        v.curve = kind;
        mesh.vertices.push_back(v);
        ++poly_points;
        return static_cast<int>(mesh.vertices.size()) - 1;
      } catch (const std::domain_error&) {
        ++lift_failures;
        return -1;
      }
    };
    auto add_polyline = [&](const std::vector<Complex>& xs, bool closed, CurveKind kind) {
      for (std::size_t k = 0; k < tiling.tiles.size(); ++k) {
        Polyline cur{kind, static_cast<int>(k), {}};
        auto flush = [&] {
          if (cur.points.size() >= 2) mesh.polylines.push_back(cur);
          cur.points.clear();
        };
        int first = -1;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const int v = add_point(tiling.tiles[k], static_cast<int>(k), xs[i], kind);
          if (v < 0) {
            flush();
            continue;
          }
          if (i == 0) first = v;
          cur.points.push_back(v);
        }
        if (closed && first >= 0 && !cur.points.empty() && cur.points.front() != first) cur.points.push_back(first);
        flush();
      }
    };
    for (const auto& c : ov.curves) add_polyline(c.x, c.closed, CurveKind::CuspidalEdge);
    for (const auto& b : ov.self_intersection) add_polyline(b, false, CurveKind::SelfIntersection);
    for (const auto& s : ov.swallowtails)
      for (std::size_t k = 0; k < tiling.tiles.size(); ++k)
        if (int v = add_point(tiling.tiles[k], static_cast<int>(k), s.x, CurveKind::Swallowtail); v >= 0)
          mesh.markers.push_back(v);
  }
  if (report) {
    report->tiles = tiling.tiles.size();
    report->vertices = mesh.vertices.size();
    report->triangles = mesh.triangles.size();
    report->polyline_points = poly_points;
    report->lift_failures = lift_failures;
  }
  return mesh;
}

// ---------------------------------------------------------------------------
// Checks

/// Largest hyperbolic distance between the images of shared edge nodes of
/// tiles g(T) and g R_k(T). Nodes on v = 0, v = 1 and u = 1 lie on mirrors
/// 1, 2 and 3 respectively.
inline double gluing_defect(const SurfaceMesh& mesh, int* pairs = nullptr) {
  const InverseSchwarzMap inv = parse_case(mesh.case_name);
  const BaseTriangle base = BaseTriangle::for_map(inv);
  const auto probes = base.probe_points();
  const int R = mesh.resolution;
  std::array<std::vector<std::pair<int, int>>, 3> edge;
  for (int t = 1; t <= R; ++t) {
    edge[0].push_back({t, 0});
    edge[1].push_back({t, R});
  }
  for (int t = 0; t <= R; ++t) edge[2].push_back({R, t});
  double worst = 0;
  int count = 0;
  for (std::size_t a = 0; a < mesh.tile_maps.size(); ++a)
    for (int k = 0; k < 3; ++k) {
      const MobiusMap gk = mesh.tile_maps[a] * base.mirrors()[k];
      for (std::size_t b = 0; b < mesh.tile_maps.size(); ++b) {
        if (b == a) continue;
        bool same = true;
        for (Complex p : probes) same = same && chordal_distance(gk(p), mesh.tile_maps[b](p)) < 1e-9;
        if (!same) continue;
        ++count;
        for (auto [i, j] : edge[k]) {
          const int idx = (i - 1) * (R + 1) + j;
          const int va = mesh.node_vertex[a][idx], vb = mesh.node_vertex[b][idx];
          if (va < 0 || vb < 0) continue;
          const FrontValue fa = eval_front_closed_form(inv, mesh.vertices[va].z);
          const FrontValue fb = eval_front_closed_form(inv, mesh.vertices[vb].z);
          worst = std::max(worst, hyperbolic_distance(fa.H, fb.H));
        }
      }
    }
  if (pairs) *pairs = count;
  return worst;
}

/// Largest relative deviation from a Lorentz hyperplane through the origin of
/// the images of each real interval, sampled along the base triangle's edges.
inline std::array<double, 3> real_interval_planarity(const InverseSchwarzMap& inv, int samples = 40) {
  const BaseTriangle base = BaseTriangle::for_map(inv);
  std::array<double, 3> worst{};
  for (int k = 0; k < 3; ++k) {
    std::vector<Lorentz> pts;
    for (int s = 1; s < samples; ++s) {
      const double a = 0.05 + 0.9 * s / samples;
      const Complex z = k == 0 ? base.fan_point(a, 0.0) : k == 1 ? base.fan_point(a, 1.0) : base.fan_point(1.0, a);
      try {
        pts.push_back(hermitian_to_lorentz(eval_front_closed_form(inv, z).H).as_lorentz());
      } catch (const std::domain_error&) {
      }
    }
    if (pts.size() < 4) throw std::runtime_error("real_interval_planarity: too few samples");
    const std::size_t n = pts.size();
    const Lorentz nrm = detail::lorentz_normal(pts[n / 6], pts[n / 2], pts[5 * n / 6]);
    for (const auto& p : pts) worst[k] = std::max(worst[k], std::abs(lorentz_dot(p, nrm)) / p.x0);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Export

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

inline std::string to_obj(const SurfaceMesh& m) {
  std::string s;
  s += "# hsm surface\n";
  s += "# case " + m.case_name + "\n";
  s += std::string("# chart ") + (m.chart == Chart::Ball ? "ball" : "uhs") + "\n";
  s += "# vertices " + std::to_string(m.vertices.size()) + " triangles " + std::to_string(m.triangles.size()) +
       " polylines " + std::to_string(m.polylines.size()) + " markers " + std::to_string(m.markers.size()) + "\n";
  for (const auto& v : m.vertices)
    s += "v " + format_number(v.p[0]) + " " + format_number(v.p[1]) + " " + format_number(v.p[2]) + "\n";
  for (const auto& t : m.triangles)
    s += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " + std::to_string(t[2] + 1) + "\n";
  for (const auto& p : m.polylines) {
    s += p.kind == CurveKind::SelfIntersection ? "g self_intersection\n" : "g cuspidal_edge\n";
    s += "l";
    for (int i : p.points) s += " " + std::to_string(i + 1);
    s += "\n";
  }
  if (!m.markers.empty()) s += "g swallowtail\n";
  for (int i : m.markers) s += "p " + std::to_string(i + 1) + "\n";
  return s;
}

inline std::string to_ply(const SurfaceMesh& m) {
  std::size_t edges = 0;
  for (const auto& p : m.polylines) edges += p.points.size() - 1;
  std::string s = "ply\nformat ascii 1.0\n";
  s += "comment hsm surface case " + m.case_name + std::string(" chart ") + (m.chart == Chart::Ball ? "ball" : "uhs") + "\n";
  s += "element vertex " + std::to_string(m.vertices.size()) + "\n";
  for (const char* p : {"x", "y", "z", "z_re", "z_im", "x_re", "x_im"}) s += std::string("property double ") + p + "\n";
  s += "property int tile\nproperty uchar near_singular\nproperty uchar clipped\nproperty uchar curve\n";
  s += "element face " + std::to_string(m.triangles.size()) + "\n";
  s += "property list uchar int vertex_indices\n";
  s += "element edge " + std::to_string(edges) + "\n";
  s += "property int vertex1\nproperty int vertex2\nend_header\n";
  for (const auto& v : m.vertices) {
    for (double c : {v.p[0], v.p[1], v.p[2], v.z.real(), v.z.imag(), v.x.real(), v.x.imag()}) s += format_number(c) + " ";
    s += std::to_string(v.tile) + " " + std::to_string(int(v.near_singular)) + " " + std::to_string(int(v.clipped)) + " " +
         std::to_string(static_cast<int>(v.curve)) + "\n";
  }
  for (const auto& t : m.triangles)
    s += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
  for (const auto& p : m.polylines)
    for (std::size_t i = 0; i + 1 < p.points.size(); ++i)
      s += std::to_string(p.points[i]) + " " + std::to_string(p.points[i + 1]) + "\n";
  return s;
}

inline std::string export_mesh_string(const SurfaceMesh& m, MeshFormat f) {
  return f == MeshFormat::Obj ? to_obj(m) : to_ply(m);
}

inline void export_mesh(const SurfaceMesh& m, const std::string& path, MeshFormat f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << export_mesh_string(m, f);
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path);
}

// ---------------------------------------------------------------------------
// Readers

struct ParsedMesh {
  std::vector<std::array<double, 3>> positions;
  std::vector<std::array<int, 3>> triangles;  // 0-based
  std::vector<std::vector<int>> lines;
  std::vector<int> points;
  // PLY only
  std::vector<std::array<double, 4>> sources;  // z_re, z_im, x_re, x_im
  std::vector<std::array<int, 4>> flags;       // tile, near_singular, clipped, curve
  std::vector<std::array<int, 2>> edges;
};

inline ParsedMesh parse_obj(const std::string& text) {
  ParsedMesh m;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  auto bad = [&](const std::string& why) { return std::runtime_error("obj line " + std::to_string(n) + ": " + why); };
  while (std::getline(in, line)) {
    ++n;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#' || tag == "g") continue;
    if (tag == "v") {
      std::array<double, 3> p{};
      if (!(ls >> p[0] >> p[1] >> p[2])) throw bad("bad vertex");
      m.positions.push_back(p);
    } else if (tag == "f") {
      std::array<int, 3> t{};
      if (!(ls >> t[0] >> t[1] >> t[2])) throw bad("bad face");
      for (int& i : t) --i;
      m.triangles.push_back(t);
    } else if (tag == "l") {
      std::vector<int> l;
      for (int i; ls >> i;) l.push_back(i - 1);
      m.lines.push_back(l);
    } else if (tag == "p") {
      int i;
      if (!(ls >> i)) throw bad("bad point");
      m.points.push_back(i - 1);
    } else {
      throw bad("unknown record '" + tag + "'");
    }
  }
  auto check = [&](int i) {
    if (i < 0 || i >= static_cast<int>(m.positions.size())) throw std::runtime_error("obj: index out of range");
  };
  for (const auto& t : m.triangles)
    for (int i : t) check(i);
  for (const auto& l : m.lines)
    for (int i : l) check(i);
  for (int i : m.points) check(i);
  return m;
}

inline ParsedMesh parse_ply(const std::string& text) {
  ParsedMesh m;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line != "ply") throw std::runtime_error("ply: missing magic");
  std::size_t nv = 0, nf = 0, ne = 0;
  while (std::getline(in, line) && line != "end_header") {
    std::istringstream ls(line);
    std::string a, b;
    ls >> a;
    if (a == "element") {
      std::size_t c = 0;
      ls >> b >> c;
      (b == "vertex" ? nv : b == "face" ? nf : ne) = c;
    }
  }
  if (line != "end_header") throw std::runtime_error("ply: missing end_header");
  for (std::size_t i = 0; i < nv; ++i) {
    std::array<double, 3> p{};
    std::array<double, 4> s{};
    std::array<int, 4> f{};
    if (!(in >> p[0] >> p[1] >> p[2] >> s[0] >> s[1] >> s[2] >> s[3] >> f[0] >> f[1] >> f[2] >> f[3]))
      throw std::runtime_error("ply: bad vertex " + std::to_string(i));
    m.positions.push_back(p);
    m.sources.push_back(s);
    m.flags.push_back(f);
  }
  for (std::size_t i = 0; i < nf; ++i) {
    int k;
    std::array<int, 3> t{};
    if (!(in >> k >> t[0] >> t[1] >> t[2]) || k != 3) throw std::runtime_error("ply: bad face " + std::to_string(i));
    m.triangles.push_back(t);
  }
  for (std::size_t i = 0; i < ne; ++i) {
    std::array<int, 2> e{};
    if (!(in >> e[0] >> e[1])) throw std::runtime_error("ply: bad edge " + std::to_string(i));
    m.edges.push_back(e);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Classification table

inline std::string singular_table(const ExponentData& e, const std::vector<TracedCurve>& curves) {
  std::string s = "x_re\tx_im\tclass\t|q|\tRe(Q3R2)\tIm(Q3R2)\n";
  for (const auto& c : curves)
    for (Complex x : c.x) {
      const SingularPointClass k = classify_point(e, x);
      s += format_number(x.real()) + "\t" + format_number(x.imag()) + "\t" + to_string(k.cls) + "\t" +
           format_number(k.abs_q) + "\t" + format_number(k.q3r2.real()) + "\t" + format_number(k.q3r2.imag()) + "\n";
    }
  return s;
}

}  // namespace hsm
