#include <gtest/gtest.h>

#include <random>

#include "hsm/frontmap.hpp"

using namespace hsm;

namespace {

std::vector<std::string> all_cases() {
  return {"dihedral:2", "dihedral:3", "dihedral:5", "tetra", "octa", "icosa", "fuchsian"};
}

// Interior grid of the base triangle in fan coordinates.
std::vector<Complex> base_grid(const BaseTriangle& b, int nu, int nv, double u0 = 0.15, double u1 = 0.9) {
  std::vector<Complex> z;
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      const double u = u0 + (u1 - u0) * i / (nu - 1.0);
      const double v = 0.08 + 0.84 * j / (nv - 1.0);
      z.push_back(b.fan_point(u, v));
    }
  return z;
}

Mat2 random_sl2(std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.2, 1.2);
  Mat2 m{{U(rng), U(rng)}, {U(rng), U(rng)}, {U(rng), U(rng)}, {U(rng), U(rng)}};
  return (1.0 / std::sqrt(m.det())) * m;
}

}  // namespace

TEST(ClosedForm, UnitDeterminantAndGramAgreement) {
  for (const auto& name : all_cases()) {
    const auto inv = parse_case(name);
    const auto base = BaseTriangle::for_map(inv);
    for (Complex z : base_grid(base, 10, 10, name == "fuchsian" ? 0.3 : 0.15)) {
      const FrontValue f = eval_front_closed_form(inv, z);
      EXPECT_LT(std::abs(f.U.det() - 1.0), 1e-10) << name << " " << z;
      const RawHermitian d = front_hermitian_direct(inv(z), z);
      const double s = f.H.h() + f.H.k();
      EXPECT_LT(std::abs(d.h - f.H.h()) + std::abs(d.k - f.H.k()) + std::abs(d.w - f.H.w()), 1e-10 * s) << name;
      EXPECT_NEAR(f.H.det(), 1.0, 1e-9 * s * s);
    }
  }
}

TEST(ClosedForm, BranchOfSquareRootCancels) {
  const auto inv = parse_case("octa");
  for (Complex z : base_grid(BaseTriangle::for_map(inv), 6, 6)) {
    const FrontValue a = eval_front_closed_form(inv, z);
    const FrontValue b = eval_front_closed_form(inv, z, -a.sqrt_dx);
    EXPECT_LT(std::abs(a.sqrt_dx + b.sqrt_dx), 1e-15 * std::abs(a.sqrt_dx));
    EXPECT_LT(std::abs(a.H.h() - b.H.h()) + std::abs(a.H.w() - b.H.w()), 1e-12 * (a.H.h() + a.H.k()));
  }
}

TEST(ClosedForm, SatisfiesTheMatrixEquationInZ) {
  // dU/dz = U [[0, q xdot], [xdot, 0]]
  for (const auto& name : all_cases()) {
    const auto inv = parse_case(name);
    const auto e = inv.exponents();
    double worst = 0;
    for (Complex z : base_grid(BaseTriangle::for_map(inv), 10, 10, name == "fuchsian" ? 0.3 : 0.15)) {
      const FrontValue f = eval_front_closed_form(inv, z);
      const double h = 1e-5 * std::max(std::abs(z), 0.05);
      auto U_at = [&](Complex w) { return eval_front_closed_form(inv, w, f.sqrt_dx).U; };
      const Mat2 dU = (1.0 / (12 * h)) * (U_at(z - 2 * h) - U_at(z + 2 * h) + 8.0 * (U_at(z + h) - U_at(z - h)));
      const MapJet j = inv(z);
      const Complex q = eval_q(e, j.x).q;
      const Mat2 rhs = f.U * Mat2{0.0, q * j.dx, j.dx, 0.0};
      worst = std::max(worst, (dU - rhs).max_abs() / std::max(1.0, rhs.max_abs()));
    }
    EXPECT_LT(worst, 1e-7) << name;
  }
}

TEST(ClosedForm, RejectsRamificationPoints) {
  const auto inv = parse_case("dihedral:3");
  EXPECT_THROW(eval_front_closed_form(inv, std::polar(1.0, pi / 3)), std::domain_error);
  EXPECT_THROW(eval_front_closed_form(inv, 1.0), std::domain_error);
}

TEST(ClosedForm, FuchsianAtI) {
  const FrontValue f = eval_front_closed_form(InverseSchwarzMap::lambda(), I);
  EXPECT_NEAR(std::abs(f.x - 0.5), 0, 1e-14);
  EXPECT_GT(f.H.h(), 0);
  EXPECT_NEAR(f.H.det(), 1.0, 1e-12);
}

TEST(ClosedForm, UpperHalfSpaceShortcutIsTheTransposedChart) {
  const auto inv = parse_case("tetra");
  for (Complex z : base_grid(BaseTriangle::for_map(inv), 5, 5)) {
    const FrontValue f = eval_front_closed_form(inv, z);
    const UpperHalfSpace s = upper_half_space_from_solutions(f.U);
    const UpperHalfSpace c = hermitian_to_upper_half_space(f.H.transposed()).as_upper_half_space();
    EXPECT_LT(std::abs(s.z - c.z), 1e-12 * (1 + std::abs(c.z)));
    EXPECT_NEAR(s.t, c.t, 1e-12 * c.t);
    const UpperHalfSpace d = hermitian_to_upper_half_space(f.H).as_upper_half_space();
    EXPECT_LT(std::abs(s.z - std::conj(d.z)), 1e-12 * (1 + std::abs(d.z)));
  }
}

TEST(PowerMap, PrincipalPartOfH) {
  for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
    const auto inv = InverseSchwarzMap::power(alpha);
    for (Complex z : {Complex(0.3, 0.2), Complex(0.01, 0.02), Complex(-0.5, 1e-3)}) {
      const RawHermitian g = front_hermitian_direct(inv(z), z);
      const double s = alpha * std::pow(std::abs(z), alpha + 1);
      const double za = alpha * std::pow(std::abs(z), alpha);
      EXPECT_NEAR(g.k * s, 0.25 * (alpha - 1) * (alpha - 1) + za * za, 1e-12);
      const Complex w = std::conj(z) * (0.25 * (alpha * alpha - 1) + za * za);
      EXPECT_LT(std::abs(g.w * s - w), 1e-12);
    }
  }
}

TEST(Ode, ConstantCoefficientTransport) {
  // mu = (1,1,1) makes Q vanish identically, so U(x) = U0 (I + (x - x0) E21).
  const ExponentData e = exponents_from_mu(1.0, 1.0, 1.0);
  EXPECT_EQ(eval_q(e, Complex(0.3, 0.4)).q, 0.0);
  std::mt19937 rng(3);
  const Mat2 U0 = random_sl2(rng);
  const Complex x0(0.5, 0.5), x1(2.0, -0.3);
  const auto sol = integrate_sl_form(e, {x0, x1}, U0);
  const Mat2 expect = U0 * Mat2{1.0, 0.0, x1 - x0, 1.0};
  EXPECT_LT((sol.U - expect).max_abs(), 1e-12);
}

TEST(Ode, WronskianIsConserved) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-1.5, 2.5);
  for (const auto& name : all_cases()) {
    const auto e = parse_case(name).exponents();
    const Complex a(U(rng), U(rng)), b(U(rng), U(rng));
    std::vector<Complex> path{a, a + Complex(0, 3), b + Complex(0, 3), b};
    bool safe = true;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      safe = safe && segment_distance(path[i], path[i + 1], 0.0) > 0.05 && segment_distance(path[i], path[i + 1], 1.0) > 0.05;
    if (!safe) continue;
    const auto s = integrate_sl_form(e, path, random_sl2(rng));
    EXPECT_LT(std::abs(s.U.det() - 1.0), 1e-9) << name;
  }
}

TEST(Ode, TrivialLoopAndSingularMargin) {
  const auto e = parse_case("fuchsian").exponents();
  std::mt19937 rng(7);
  const Mat2 U0 = random_sl2(rng);
  const std::vector<Complex> loop{0.5, Complex(0.7, 0.1), Complex(0.5, 0.3), Complex(0.3, 0.1), 0.5};
  EXPECT_LT((integrate_sl_form(e, loop, U0).U - U0).max_abs(), 1e-8);
  // a loop around x = 1 has nontrivial monodromy
  const std::vector<Complex> around{0.5, Complex(1, -0.5), Complex(1.5, 0), Complex(1, 0.5), 0.5};
  EXPECT_GT((integrate_sl_form(e, around, U0).U - U0).max_abs(), 1e-2);
  EXPECT_THROW(integrate_sl_form(e, {0.5, Complex(1.0, 5e-4)}, U0), std::domain_error);
  EXPECT_THROW(integrate_sl_form(e, {0.5, 0.7}, 2.0 * U0), std::domain_error);
}

TEST(Ode, OraclePathAvoidsSingularPoints) {
  for (Complex x : {Complex(0.02, 0.01), Complex(1.3, -0.01), Complex(-2, 0.3), Complex(0.4, 0.2)}) {
    const auto p = oracle_path(x);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      EXPECT_TRUE(p[i].imag() * x.imag() >= 0 || p[i].imag() == 0);
      EXPECT_GT(segment_distance(p[i], p[i + 1], 0.0), 1e-3);
      EXPECT_GT(segment_distance(p[i], p[i + 1], 1.0), 1e-3);
    }
    EXPECT_EQ(p.back(), x);
  }
}

TEST(Isometry, MatchIdenticalAndTransformedGrids) {
  const auto inv = parse_case("dihedral:3");
  std::vector<HermitianForm> Ha;
  // Moderate forms only: a stored form with trace s pins its point down to about eps * s^2.
  for (Complex z : base_grid(BaseTriangle::for_map(inv), 6, 6, 0.4, 0.8)) Ha.push_back(eval_front_closed_form(inv, z).H);
  const IsometryMatch same = match_isometry(Ha, Ha);
  EXPECT_LT(same.residual, 1e-12);
  const Mat2 P = same.P.matrix();
  EXPECT_LT(std::min((P - Mat2::identity()).max_abs(), (P + Mat2::identity()).max_abs()), 1e-9);

  std::mt19937 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat2 P0 = random_sl2(rng);
    std::vector<HermitianForm> Hb;
    for (const auto& H : Ha) Hb.push_back(apply_isometry(Isometry(P0.inverse()), H));
    const IsometryMatch m = match_isometry(Ha, Hb);
    EXPECT_LT(m.residual, 1e-10);
    const Mat2 R = m.P.matrix();
    EXPECT_LT(std::min((R - P0).max_abs(), (R + P0).max_abs()), 1e-8 * P0.max_abs());
  }
  EXPECT_THROW(match_isometry(Ha, {}), std::invalid_argument);
}

TEST(Oracle, ClosedFormMatchesIntegratedFront) {
  for (const std::string name : {"dihedral:3", "fuchsian", "tetra"}) {
    const auto inv = parse_case(name);
    const auto base = BaseTriangle::for_map(inv);
    const SlFront ode(inv.exponents(), basepoint_matrix(inv, base));
    std::vector<HermitianForm> Ha, Hb;
    for (Complex z : base_grid(base, 20, 10, name == "fuchsian" ? 0.3 : 0.15, 0.85)) {
      const FrontValue f = eval_front_closed_form(inv, z);
      Ha.push_back(f.H);
      Hb.push_back(ode(f.x));
    }
    ASSERT_EQ(Ha.size(), 200u);
    const IsometryMatch m = match_isometry(Ha, Hb);
    EXPECT_LT(m.residual, 1e-6) << name;
    // the basepoint choice removes the gauge
    EXPECT_LT(std::min((m.P.matrix() - Mat2::identity()).max_abs(), (m.P.matrix() + Mat2::identity()).max_abs()),
              1e-6)
        << name;
  }
}

TEST(Monodromy, EachTileIsAnIsometricCopy) {
  for (const std::string name : {"dihedral:3", "octa", "fuchsian"}) {
    const auto inv = parse_case(name);
    const auto base = BaseTriangle::for_map(inv);
    const Tiling t = tile_parameter_domain(base, name == "fuchsian" ? 12 : 48);
    const auto grid = base_grid(base, 5, 5, name == "fuchsian" ? 0.3 : 0.15);
    std::vector<HermitianForm> Hb;
    for (Complex z : grid) Hb.push_back(eval_front_closed_form(inv, z).H);
    for (const auto& tile : t.tiles) {
      if (tile.mirrored) continue;
      std::vector<HermitianForm> Ha;
      for (Complex z : grid) Ha.push_back(eval_front_closed_form(inv, tile.g(z)).H);
      EXPECT_LT(match_isometry(Ha, Hb).residual, 1e-6) << name << " " << tile.word;
    }
  }
}

TEST(Monodromy, FramesKeepPrecisionForFarImages) {
  for (const std::string name : {"dihedral:3", "octa", "icosa", "fuchsian"}) {
    const auto inv = parse_case(name);
    const auto base = BaseTriangle::for_map(inv);
    const Tiling t = tile_parameter_domain(base, name == "fuchsian" ? 12 : 120);
    const auto grid = base_grid(base, 5, 5, name == "fuchsian" ? 0.3 : 0.15);
    std::vector<Mat2> Ub;
    for (Complex z : grid) Ub.push_back(eval_front_closed_form(inv, z).U);
    double worst = 0;
    for (const auto& tile : t.tiles) {
      if (tile.mirrored) continue;
      std::vector<Mat2> Ua;
      for (Complex z : grid) Ua.push_back(eval_front_closed_form(inv, tile.g(z)).U);
      worst = std::max(worst, match_isometry(Ua, Ub).residual);
    }
    EXPECT_LT(worst, 1e-8) << name;
  }
  const Mat2 A{2.0, 1.0, 1.0, 1.0};
  EXPECT_NEAR(frame_distance(A, A), 0.0, 1e-15);
  EXPECT_NEAR(frame_distance(Mat2::identity(), Mat2{std::exp(1.0), 0.0, 0.0, std::exp(-1.0)}), 2.0, 1e-14);
}

TEST(EndBehavior, RaysReachTheSphere) {
  struct Ray {
    std::string name;
    std::vector<Complex> z;
  };
  std::vector<Ray> rays;
  {
    Ray r{"fuchsian", {}};
    for (int k = 0; k < 9; ++k) r.z.push_back(Complex(0, 0.6 * std::pow(0.8, k)));
    rays.push_back(r);
  }
  {
    Ray r{"dihedral:3", {}};
    for (int k = 0; k < 24; ++k) r.z.push_back(std::polar(0.4 * std::pow(0.5, k), pi / 6));
    rays.push_back(r);
  }
  {
    Ray r{"octa", {}};  // toward the corner over x = 1
    const Complex v = BaseTriangle::polyhedral(PolyhedralTag::octahedral()).vertices()[1];
    for (int k = 0; k < 20; ++k) r.z.push_back(v + std::polar(0.1 * std::pow(0.5, k), 2.0));
    rays.push_back(r);
  }
  for (const auto& r : rays) {
    const EndProbe p = end_behavior_probe(parse_case(r.name), r.z);
    EXPECT_TRUE(p.monotone_tail) << r.name;
    EXPECT_GT(p.norms.back(), 1 - 1e-3) << r.name;
    // lambda underflows near Im z = 0.005, which caps how far the cusp ray can go
    EXPECT_LT(p.cauchy_gap, r.name == "fuchsian" ? 0.1 : 1e-6) << r.name;
  }
}
