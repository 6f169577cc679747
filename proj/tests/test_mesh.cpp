#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "hsm/mesh.hpp"

using namespace hsm;

namespace {

JobConfig job(const std::string& name, int res = 8) {
  JobConfig c;
  c.case_name = name;
  c.resolution = res;
  return c;
}

std::string read_file(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, KeyValueAndOverrides) {
  const JobConfig c = parse_config("# job\ncase = octa\nresolution=12  # finer\nchart=uhs\nformat = ply\n"
                                   "words = e, 1 ,12\ntol.margin=2e-3\npolylines=off\n");
  EXPECT_EQ(c.case_name, "octa");
  EXPECT_EQ(c.resolution, 12);
  EXPECT_EQ(c.chart, Chart::UpperHalfSpace);
  EXPECT_EQ(c.format, MeshFormat::Ply);
  EXPECT_EQ(c.words, (std::vector<std::string>{"e", "1", "12"}));
  EXPECT_DOUBLE_EQ(c.tol.margin, 2e-3);
  EXPECT_FALSE(c.polylines);
  JobConfig d = c;
  apply_setting(d, "resolution", "20");
  EXPECT_EQ(d.resolution, 20);
  EXPECT_THROW(parse_config("bogus=1"), std::invalid_argument);
  EXPECT_THROW(parse_config("resolution=abc"), std::invalid_argument);
  EXPECT_THROW(parse_config("just words"), std::invalid_argument);
  EXPECT_THROW(parse_config("chart=klein"), std::invalid_argument);
}

TEST(Config, Validation) {
  JobConfig c = job("dihedral:3");
  c.resolution = 7;
  EXPECT_THROW(build_mesh(c), std::invalid_argument);
  c = job("dihedral:3");
  c.tiles = 13;
  EXPECT_THROW(build_mesh(c), std::invalid_argument);
}

TEST(Sample, DihedralFan) {
  const auto inv = parse_case("dihedral:3");
  const auto base = BaseTriangle::for_map(inv);
  EXPECT_NEAR(base.sector_angle(), pi / 3, 1e-15);
  const TriangleSample s = sample_triangle(base, MobiusMap::identity(), 8);
  EXPECT_GE(s.nodes.size(), 64u);
  for (const auto& n : s.nodes) {
    EXPECT_TRUE(base.contains(n.z, -1e-12));
    EXPECT_GE(std::arg(n.z), -1e-15);
    EXPECT_LE(std::arg(n.z), pi / 3 + 1e-15);
  }
  // the two corners on the outer arc are dropped
  EXPECT_EQ(s.dropped, 2);
  EXPECT_EQ(s.at(8, 0), -1);
  EXPECT_EQ(s.at(8, 8), -1);
}

TEST(Sample, FuchsianMarginAndEmpty) {
  const auto base = BaseTriangle::fuchsian();
  const TriangleSample s = sample_triangle(base, MobiusMap::identity(), 8);
  EXPECT_GE(s.nodes.size(), 64u);
  for (const auto& n : s.nodes) {
    EXPECT_TRUE(base.contains(n.z, -1e-12));
    EXPECT_LE(std::abs((n.z - I) / (n.z + I)), 1 - 1e-3);
  }
  MeshTolerances wide;
  wide.margin = 1.0;
  try {
    sample_triangle(base, MobiusMap::identity(), 8, wide);
    FAIL() << "expected an error";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("boundary"), std::string::npos);
  }
}

TEST(Export, EmptyMesh) {
  const SurfaceMesh m;
  const std::string obj = to_obj(m);
  const ParsedMesh po = parse_obj(obj);
  EXPECT_TRUE(po.positions.empty());
  EXPECT_TRUE(po.triangles.empty());
  const ParsedMesh pp = parse_ply(to_ply(m));
  EXPECT_TRUE(pp.positions.empty());
  EXPECT_NE(to_ply(m).find("end_header"), std::string::npos);
}

TEST(Export, SingleTriangle) {
  SurfaceMesh m;
  for (int k = 0; k < 3; ++k) {
    MeshVertex v;
    v.p = {0.1 * k, -0.2, 0.3 + 1e-13};
    m.vertices.push_back(v);
  }
  m.triangles.push_back({0, 1, 2});
  const std::string obj = to_obj(m);
  int v = 0, f = 0;
  std::istringstream in(obj);
  for (std::string line; std::getline(in, line);) {
    v += line.rfind("v ", 0) == 0;
    f += line.rfind("f ", 0) == 0;
  }
  EXPECT_EQ(v, 3);
  EXPECT_EQ(f, 1);
  EXPECT_NE(obj.find("f 1 2 3"), std::string::npos);
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.1");
}

TEST(Export, RejectsBadInput) {
  EXPECT_THROW(parse_obj("v 1 2\n"), std::runtime_error);
  EXPECT_THROW(parse_obj("v 1 2 3\nf 1 2 4\n"), std::runtime_error);
  EXPECT_THROW(parse_ply("plx\n"), std::runtime_error);
  EXPECT_THROW(export_mesh(SurfaceMesh{}, "/nonexistent-dir/x.obj", MeshFormat::Obj), std::runtime_error);
}

TEST(Export, FuchsianRoundTrip) {
  JobConfig c = job("fuchsian", 12);
  c.words = {"e"};
  c.polylines = false;
  const SurfaceMesh m = build_mesh(c);
  const BaseTriangle base = BaseTriangle::fuchsian();
  const std::size_t grid = sample_triangle(base, MobiusMap::identity(), 12).nodes.size();
  const ParsedMesh po = parse_obj(to_obj(m));
  const ParsedMesh pp = parse_ply(to_ply(m));
  ASSERT_EQ(po.positions.size(), m.vertices.size());
  ASSERT_EQ(pp.positions.size(), m.vertices.size());
  EXPECT_LE(m.vertices.size(), grid);
  EXPECT_GE(m.vertices.size(), grid - 4);  // cusp nodes may fail to evaluate
  EXPECT_EQ(po.triangles, m.triangles);
  EXPECT_EQ(pp.triangles, m.triangles);
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(po.positions[i][k], m.vertices[i].p[k], 1e-9);
      EXPECT_NEAR(pp.positions[i][k], m.vertices[i].p[k], 1e-9);
    }
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    EXPECT_NEAR(pp.sources[i][0], m.vertices[i].z.real(), 1e-9 * (1 + std::abs(m.vertices[i].z)));
    EXPECT_EQ(pp.flags[i][2], int(m.vertices[i].clipped));
  }
  // re-export of the parsed OBJ is identical text
  SurfaceMesh back;
  back.case_name = m.case_name;
  for (const auto& p : po.positions) {
    MeshVertex v;
    v.p = p;
    back.vertices.push_back(v);
  }
  back.triangles = po.triangles;
  EXPECT_EQ(to_obj(back), to_obj(m));
}

TEST(Export, RepeatRunsAreByteIdentical) {
  JobConfig c = job("dihedral:3", 10);
  c.self_intersection = false;
  const auto dir = std::filesystem::temp_directory_path();
  const std::string a = (dir / "hsm_mesh_a.ply").string(), b = (dir / "hsm_mesh_b.ply").string();
  export_mesh(build_mesh(c), a, MeshFormat::Ply);
  export_mesh(build_mesh(c), b, MeshFormat::Ply);
  const std::string ta = read_file(a), tb = read_file(b);
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, tb);
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST(Mesh, DihedralSixFansWithOverlays) {
  const auto inv = parse_case("dihedral:3");
  JobConfig c = job("dihedral:3", 10);
  c.tiles = 6;
  MeshBuildReport rep;
  const SurfaceMesh m = build_mesh(c, &rep);
  EXPECT_EQ(rep.tiles, 6u);
  EXPECT_EQ(m.tile_words.size(), 6u);
  for (const auto& v : m.vertices) EXPECT_LT(std::hypot(v.p[0], v.p[1], v.p[2]), 1.0);
  for (const auto& t : m.triangles)
    for (int i : t) ASSERT_TRUE(i >= 0 && i < static_cast<int>(m.vertices.size()));
  int cusp = 0, self = 0;
  for (const auto& p : m.polylines) (p.kind == CurveKind::CuspidalEdge ? cusp : self)++;
  EXPECT_GT(cusp, 0);
  EXPECT_GT(self, 0);
  // each swallowtail sits on one tile of each half-plane pair
  EXPECT_GE(m.markers.size(), 2u);
  for (const auto& p : m.polylines)
    for (int i : p.points) {
      const MeshVertex& v = m.vertices[i];
      EXPECT_LT(std::abs(inv(v.z).x - v.x), 1e-6 * (1 + std::abs(v.x)));
      if (p.kind == CurveKind::CuspidalEdge) {
        EXPECT_LT(std::abs(std::abs(eval_q(inv.exponents(), v.x).q) - 1), 1e-8);
      }
    }
  EXPECT_EQ(rep.lift_failures, 0u);
}

TEST(Mesh, IcosahedralSixtyTiles) {
  JobConfig c = job("icosa", 8);
  c.tiles = 60;
  c.polylines = false;
  const SurfaceMesh m = build_mesh(c);
  EXPECT_EQ(m.tile_words.size(), 60u);
  EXPECT_GT(m.triangles.size(), 60u * 80u);
}

TEST(Mesh, FuchsianTwoTriangles) {
  JobConfig c = job("fuchsian", 10);
  c.words = {"e", "1"};
  c.self_intersection = false;
  const SurfaceMesh m = build_mesh(c);
  EXPECT_EQ(m.tile_words, (std::vector<std::string>{"e", "1"}));
  for (const auto& v : m.vertices) EXPECT_LT(std::hypot(v.p[0], v.p[1], v.p[2]), 1.0);
  EXPECT_FALSE(m.polylines.empty());
  EXPECT_EQ(m.markers.size(), 2u);
}

TEST(Mesh, UpperHalfSpaceChart) {
  JobConfig c = job("tetra", 8);
  c.chart = Chart::UpperHalfSpace;
  c.polylines = false;
  const SurfaceMesh m = build_mesh(c);
  for (const auto& v : m.vertices) EXPECT_GT(v.p[2], 0.0);
}

TEST(Mesh, AdjacentTilesGlue) {
  for (const std::string name : {"dihedral:3", "octa", "fuchsian"}) {
    JobConfig c = job(name, 8);
    c.polylines = false;
    if (name == "fuchsian") c.tiles = 8;
    const SurfaceMesh m = build_mesh(c);
    int pairs = 0;
    EXPECT_LT(gluing_defect(m, &pairs), 1e-6) << name;
    EXPECT_GT(pairs, 0) << name;
  }
}

TEST(Mesh, RealIntervalsAreTotallyGeodesic) {
  for (const std::string name : {"dihedral:2", "dihedral:3", "tetra", "octa", "icosa", "fuchsian"}) {
    const auto w = real_interval_planarity(parse_case(name));
    for (double r : w) EXPECT_LT(r, 1e-6) << name;
  }
}

TEST(SingularTable, Columns) {
  const ExponentData e = exponents_from_orders(0, 0, 0);
  const SingularOverlay o = singular_overlay(e, false);
  ASSERT_FALSE(o.curves.empty());
  const std::string t = singular_table(e, o.curves);
  EXPECT_EQ(t.substr(0, t.find('\n')), "x_re\tx_im\tclass\t|q|\tRe(Q3R2)\tIm(Q3R2)");
  EXPECT_NE(t.find("swallowtail"), std::string::npos);
  EXPECT_NE(t.find("cuspidal_edge"), std::string::npos);
}
