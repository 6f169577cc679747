#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "hsm/hsm.hpp"

using namespace hsm;

namespace {

struct JobFlags {
  std::string config, case_name, words, chart, format, out;
  std::optional<int> tiles, resolution;
  std::optional<double> margin, ramification, near_singular, on_curve;
};

void add_job_flags(CLI::App* app, JobFlags& f) {
  app->add_option("--config", f.config, "key=value job file, applied before the flags");
  app->add_option("--case", f.case_name, "dihedral:n | tetra | octa | icosa | fuchsian");
  auto* tiles = app->add_option("--tiles", f.tiles, "number of tiles, in enumeration order");
  app->add_option("--words", f.words, "comma-separated reflection words, e.g. e,1,12")->excludes(tiles);
  app->add_option("--resolution", f.resolution, "grid resolution per triangle (>= 8)");
  app->add_option("--chart", f.chart, "ball | uhs");
  app->add_option("--format", f.format, "obj | ply");
  app->add_option("--out", f.out, "output path (stdout if omitted)");
  app->add_option("--tol-margin", f.margin, "disk margin kept from the cusps");
  app->add_option("--tol-ramification", f.ramification, "chordal distance kept from triangle corners");
  app->add_option("--tol-near-singular", f.near_singular, "flag vertices with ||q|-1| below this");
  app->add_option("--tol-on-curve", f.on_curve, "polyline points must reproduce x to this");
}

JobConfig resolve(const JobFlags& f) {
  JobConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  auto set = [&](const char* key, const std::string& v) {
    if (!v.empty()) apply_setting(c, key, v);
  };
  auto num = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.17g", v);
    return std::string(b);
  };
  set("case", f.case_name);
  set("words", f.words);
  set("chart", f.chart);
  set("format", f.format);
  set("out", f.out);
  if (f.tiles) {
    apply_setting(c, "tiles", std::to_string(*f.tiles));
    c.words.clear();
  }
  if (f.resolution) apply_setting(c, "resolution", std::to_string(*f.resolution));
  if (f.margin) apply_setting(c, "tol.margin", num(*f.margin));
  if (f.ramification) apply_setting(c, "tol.ramification", num(*f.ramification));
  if (f.near_singular) apply_setting(c, "tol.near_singular", num(*f.near_singular));
  if (f.on_curve) apply_setting(c, "tol.on_curve", num(*f.on_curve));
  return c;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

int cmd_surface(const JobConfig& c, bool no_polylines, bool verbose) {
  JobConfig cfg = c;
  if (no_polylines) cfg.polylines = false;
  MeshBuildReport rep;
  const SurfaceMesh m = build_mesh(cfg, &rep);
  if (verbose)
    for (const auto& d : m.diagnostics) std::cerr << "note: " << d << "\n";
  else if (!m.diagnostics.empty())
    std::cerr << m.diagnostics.size() << " sampling notes (--verbose to list)\n";
  if (cfg.out.empty())
    std::cout << export_mesh_string(m, cfg.format);
  else
    export_mesh(m, cfg.out, cfg.format);
  std::cerr << "tiles " << rep.tiles << ", vertices " << rep.vertices << ", triangles " << rep.triangles
            << ", polyline points " << rep.polyline_points << ", lift failures " << rep.lift_failures << "\n";
  return 0;
}

// x-plane polylines: curves as l records, self-intersection branches and
// swallowtails after them. Third coordinate is zero.
std::string x_polylines(const SingularOverlay& o) {
  SurfaceMesh m;
  auto add = [&](const std::vector<Complex>& xs, bool closed, CurveKind kind) {
    Polyline p{kind, 0, {}};
    for (Complex x : xs) {
      MeshVertex v;
      v.p = {x.real(), x.imag(), 0.0};
      v.x = x;
      v.curve = kind;
      p.points.push_back(static_cast<int>(m.vertices.size()));
      m.vertices.push_back(v);
    }
    if (closed && p.points.size() > 2) p.points.push_back(p.points.front());
    if (p.points.size() >= 2) m.polylines.push_back(std::move(p));
  };
  for (const auto& c : o.curves) add(c.x, c.closed, CurveKind::CuspidalEdge);
  for (const auto& b : o.self_intersection) add(b, false, CurveKind::SelfIntersection);
  for (const auto& s : o.swallowtails) {
    MeshVertex v;
    v.p = {s.x.real(), s.x.imag(), 0.0};
    v.x = s.x;
    v.curve = CurveKind::Swallowtail;
    m.markers.push_back(static_cast<int>(m.vertices.size()));
    m.vertices.push_back(v);
  }
  return to_obj(m);
}

int cmd_singular(const JobConfig& c, const std::string& polylines_path) {
  const InverseSchwarzMap inv = parse_case(c.case_name);
  const BaseTriangle base = BaseTriangle::for_map(inv);
  const TileLift upper_lift(inv, base, upper_half_plane_tile(inv, base), 32);
  const FrontEvaluator upper = [&](Complex x) { return upper_lift.front(x).H; };
  const SingularOverlay o = singular_overlay(inv.exponents(), c.self_intersection, &upper);
  if (o.curves.empty()) std::cerr << "no singular curve found in the default seed boxes\n";
  std::string table = singular_table(inv.exponents(), o.curves);
  for (const auto& s : o.swallowtails)
    table += format_number(s.x.real()) + "\t" + format_number(s.x.imag()) + "\t" + to_string(s.cls) + "\t" +
             format_number(s.abs_q) + "\t" + format_number(s.q3r2.real()) + "\t" + format_number(s.q3r2.imag()) + "\n";
  write_text(c.out, table);
  if (!polylines_path.empty()) write_text(polylines_path, x_polylines(o));
  for (const auto& cv : o.curves)
    std::cerr << "curve: " << cv.x.size() << " samples, " << (cv.closed ? "closed" : "open") << "\n";
  for (const auto& s : o.swallowtails)
    std::cerr << "swallowtail at " << format_number(s.x.real()) << (s.x.imag() < 0 ? " - " : " + ")
              << format_number(std::abs(s.x.imag())) << "i\n";
  return 0;
}

int cmd_tiles(const JobConfig& c) {
  const InverseSchwarzMap inv = parse_case(c.case_name);
  const BaseTriangle base = BaseTriangle::for_map(inv);
  const Tiling t = job_tiles(c, base);
  std::cout << "word\tmirrored\ta\tb\tc\td\n";
  auto cx = [](Complex z) { return format_number(z.real()) + (z.imag() < 0 ? "-" : "+") + format_number(std::abs(z.imag())) + "i"; };
  for (const auto& tile : t.tiles) {
    const Mat2& m = tile.g.m;
    std::cout << tile.word << "\t" << (tile.mirrored ? 1 : 0) << "\t" << cx(m.a) << "\t" << cx(m.b) << "\t" << cx(m.c)
              << "\t" << cx(m.d) << "\n";
  }
  std::cerr << t.tiles.size() << " tiles";
  if (t.exhausted) std::cerr << " (whole group)";
  if (t.partial) std::cerr << " (depth limit reached)";
  std::cerr << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic Schwarz maps: fronts in H^3, singular loci and meshes"};
  app.require_subcommand(1);

  JobFlags surface_flags, singular_flags, tiles_flags;
  bool no_polylines = false, no_self = false, quick = false, verbose = false;
  std::string polylines_path;

  auto* surface = app.add_subcommand("surface", "build the front over the selected tiles and export a mesh");
  add_job_flags(surface, surface_flags);
  surface->add_flag("--no-polylines", no_polylines, "skip the singular overlay");
  surface->add_flag("--no-self-intersection", no_self, "skip the self-intersection curve");
  surface->add_flag("-v,--verbose", verbose, "list per-tile sampling notes");

  auto* singular = app.add_subcommand("singular-locus", "trace the singular curve and classify its points");
  add_job_flags(singular, singular_flags);
  singular->add_option("--polylines", polylines_path, "also write the curves in the x-plane as OBJ");
  singular->add_flag("--no-self-intersection", no_self, "skip the self-intersection curve");

  auto* selfcheck = app.add_subcommand("selfcheck", "run the acceptance checks and print a report");
  selfcheck->add_flag("--quick", quick, "smaller samples");

  auto* tiles = app.add_subcommand("tiles", "list the group elements used as tiles");
  add_job_flags(tiles, tiles_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*selfcheck) {
      SelfCheckOptions o;
      o.quick = quick;
      const auto r = run_selfcheck(o);
      std::cout << format_report(r);
      for (const auto& e : r)
        if (!e.pass) return 1;
      return 0;
    }
    if (*surface) {
      JobConfig c = resolve(surface_flags);
      if (no_self) c.self_intersection = false;
      return cmd_surface(c, no_polylines, verbose);
    }
    if (*singular) {
      JobConfig c = resolve(singular_flags);
      if (no_self) c.self_intersection = false;
      return cmd_singular(c, polylines_path);
    }
    if (*tiles) return cmd_tiles(resolve(tiles_flags));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
