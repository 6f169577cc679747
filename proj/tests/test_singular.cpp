#include <gtest/gtest.h>

#include <random>

#include "hsm/frontmap.hpp"
#include "hsm/singular.hpp"

using namespace hsm;

namespace {

const double t_star = std::sqrt((-3.0 + std::sqrt(17.0)) / 8.0);

ExponentData fuchsian() { return exponents_from_orders(0, 0, 0); }
ExponentData dihedral3() { return exponents_from_orders(2, 2, 3); }

const SeedBox symmetric_box{Complex(0.3, 0.0), Complex(0.7, 0.8)};

}  // namespace

TEST(Classify, Examples) {
  const ExponentData e = fuchsian();
  EXPECT_EQ(classify_point(e, Complex(0.5, t_star)).cls, SingularClass::Swallowtail);
  const auto mid = classify_point(e, 0.5);
  EXPECT_EQ(mid.cls, SingularClass::NotSingular);
  EXPECT_NEAR(mid.abs_q, 3.0, 1e-14);
  const auto off = project_to_singular_curve(e, Complex(0.9, 0.4));
  ASSERT_TRUE(off);
  EXPECT_EQ(classify_point(e, *off).cls, SingularClass::CuspidalEdge);
  EXPECT_THROW(classify_point(e, 1.0), std::domain_error);
}

TEST(Classify, NonPositiveReal) {
  EXPECT_TRUE(is_nonpositive_real(Complex(-2.0, 1e-12), 1e-9));
  EXPECT_TRUE(is_nonpositive_real(Complex(0.0, 0.0), 1e-9));
  EXPECT_FALSE(is_nonpositive_real(Complex(-2.0, 1e-6), 1e-9));
  EXPECT_FALSE(is_nonpositive_real(Complex(3.0, 0.0), 1e-9));
}

TEST(Trace, FuchsianClosedSymmetricAndOnCurve) {
  const ExponentData e = fuchsian();
  const TracedCurve c = trace_singular_curve(e, symmetric_box);
  ASSERT_GT(c.x.size(), 100u);
  EXPECT_TRUE(c.closed) << "gap " << c.closure_gap;
  EXPECT_NEAR(c.x.front().real(), 0.5, 1e-12);
  EXPECT_NEAR(c.x.front().imag(), t_star, 1e-10);
  for (Complex x : c.x) {
    EXPECT_LT(std::abs(singular_function(e, x).f), 1e-10);
    EXPECT_LT(std::abs(std::abs(eval_q(e, x).q) - 1.0), 1e-8);
  }
  EXPECT_LT(symmetry_defect(e, c), 1e-8);
  // the curve also crosses the symmetry line at -t*
  int crossings = 0;
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    const Complex a = c.x[i], b = c.x[(i + 1) % c.x.size()];
    if ((a.real() - 0.5) * (b.real() - 0.5) >= 0 || a.imag() > 0) continue;
    const double w = (0.5 - a.real()) / (b.real() - a.real());
    EXPECT_NEAR(a.imag() + w * (b.imag() - a.imag()), -t_star, 1e-5);
    ++crossings;
  }
  EXPECT_EQ(crossings, 1);
}

TEST(Trace, DihedralCocoon) {
  const ExponentData e = dihedral3();
  const TracedCurve c = trace_singular_curve(e, symmetric_box);
  ASSERT_GT(c.x.size(), 100u);
  EXPECT_TRUE(c.closed);
  EXPECT_LT(symmetry_defect(e, c), 1e-8);
  // encloses the segment [0,1]: winding about 1/2 is one
  double wind = 0;
  for (std::size_t i = 0; i < c.x.size(); ++i)
    wind += std::arg((c.x[(i + 1) % c.x.size()] - 0.5) / (c.x[i] - 0.5));
  EXPECT_NEAR(std::abs(wind), 2 * pi, 1e-6);
  for (Complex x : c.x) EXPECT_LT(std::abs(std::abs(eval_q(e, x).q) - 1.0), 1e-8);
}

TEST(Trace, EmptyWithoutCrossing) {
  const TracedCurve c = trace_singular_curve(fuchsian(), SeedBox{Complex(0.4, 0.0), Complex(0.6, 0.2)});
  EXPECT_TRUE(c.x.empty());
}

TEST(Swallowtail, OnePerHalfPlane) {
  for (const ExponentData& e : {fuchsian(), dihedral3()}) {
    const TracedCurve c = trace_singular_curve(e, symmetric_box);
    const auto st = find_swallowtails(e, c);
    int upper = 0, lower = 0;
    for (const auto& p : st) {
      EXPECT_NEAR(p.x.real(), 0.5, 1e-10);
      EXPECT_EQ(p.cls, SingularClass::Swallowtail);
      (p.x.imag() > 0 ? upper : lower)++;
    }
    EXPECT_EQ(upper, 1);
    EXPECT_EQ(lower, 1);
    // cuspidal edges away from the swallowtails
    int cusp = 0, away = 0;
    for (Complex x : c.x) {
      bool near = false;
      for (const auto& p : st) near = near || std::abs(x - p.x) < 1e-3;
      if (near) continue;
      ++away;
      cusp += classify_point(e, x).cls == SingularClass::CuspidalEdge;
    }
    EXPECT_GE(cusp, 0.99 * away);
  }
}

TEST(Swallowtail, FuchsianLocation) {
  const ExponentData e = fuchsian();
  const auto st = find_swallowtails(e, trace_singular_curve(e, symmetric_box));
  for (const auto& p : st)
    if (p.x.imag() > 0) {
      EXPECT_NEAR(p.x.imag(), t_star, 1e-10);
    }
  EXPECT_NEAR(t_star, 0.3746841, 1e-7);
}

TEST(Swallowtail, DihedralOnCrossing) {
  const ExponentData e = dihedral3();
  // Q = 3/4 - 8x/9 + 8x^2/9 is real on Re x = 1/2; solve the crossing directly
  auto f = [](double t) {
    const double T = t * t;
    return 3.0 / 4.0 - 2.0 / 9.0 - 8.0 * T / 9.0 - 4.0 * std::pow(0.25 + T, 2);
  };
  double lo = 0.1, hi = 0.5;
  for (int i = 0; i < 200; ++i) ((f(lo) > 0) == (f(0.5 * (lo + hi)) > 0) ? lo : hi) = 0.5 * (lo + hi);
  const auto st = find_swallowtails(e, trace_singular_curve(e, symmetric_box));
  int found = 0;
  for (const auto& p : st)
    if (p.x.imag() > 0) {
      EXPECT_NEAR(p.x.imag(), lo, 1e-10);
      ++found;
    }
  EXPECT_EQ(found, 1);
  EXPECT_NEAR(lo, 0.293, 1e-3);
}

TEST(Swallowtail, NewtonMatchesElimination) {
  const FuchsianEliminationData d = fuchsian_elimination();
  const Complex newton = swallowtail_newton(fuchsian(), Complex(0.52, 0.36));
  EXPECT_LT(std::abs(newton - d.swallowtail), 1e-9);
  EXPECT_NEAR(d.symmetric_T, (-3.0 + std::sqrt(17.0)) / 8.0, 1e-15);
}

TEST(Swallowtail, SymmetryLineExpression) {
  for (int k = 1; k <= 20; ++k) {
    const double t = 0.05 * k;
    const SymmetryLineCheck c = symmetry_line_swallowtail_expression(t);
    EXPECT_LT(std::abs(c.lhs.real() - c.rhs), 1e-10 * std::abs(c.rhs)) << t;
    EXPECT_LT(std::abs(c.lhs.imag()), 1e-10 * std::abs(c.rhs));
  }
}

TEST(Elimination, PrintedCoefficients) {
  const FuchsianEliminationData d = fuchsian_elimination();
  EXPECT_EQ(d.F.coeff({0, 0, 0}), Rational(1, 2));
  EXPECT_EQ(d.G.coeff({0, 0, 0}), Rational(1323, 256));
  EXPECT_EQ(d.calibration_F, Rational(1));
  EXPECT_EQ(d.calibration_G, Rational(-1));
  EXPECT_EQ(d.G1.degree_in(1), 1);
  EXPECT_TRUE(d.G1.coefficient_of(1, 2).is_zero());
  EXPECT_TRUE((d.G1 - d.G1_printed).is_zero()) << d.G1.str({"S", "V", "-"});
  EXPECT_EQ(d.G1.coeff({0, 0, 0}), Rational(-1283, 16));
  EXPECT_EQ(d.G1.coeff({2, 0, 0}), Rational(-43));
  EXPECT_EQ(d.G1.coeff({1, 1, 0}), Rational(1024));
  EXPECT_EQ(d.G1.coeff({1, 0, 0}), Rational(-353, 2));
  EXPECT_EQ(d.G1.coeff({0, 1, 0}), Rational(340));
  EXPECT_EQ(d.G1.coeff({3, 0, 0}), Rational(256));
}

TEST(Elimination, TranscriptionDifferences) {
  const FuchsianEliminationData d = fuchsian_elimination();
  const MPoly U = MPoly::var(0), T = MPoly::var(1);
  // the T U^3 term and the sign of T^4 in G differ from the displayed forms
  EXPECT_TRUE((d.F - d.F_printed - MPoly(Rational(-128)) * T * U.pow(3)).is_zero()) << (d.F - d.F_printed).str({"U", "T", "-"});
  const MPoly dG = d.G - d.G_printed;
  EXPECT_EQ(dG.terms().size(), 1u) << dG.str({"U", "T", "-"});
  EXPECT_EQ(dG.degree_in(1), 4);
}

TEST(Elimination, CubicAndCandidates) {
  const FuchsianEliminationData d = fuchsian_elimination();
  EXPECT_EQ(d.cubic.degree_in(0), 3);
  EXPECT_EQ(d.cubic.coeff({3, 0, 0}), Rational(32768));
  EXPECT_EQ(d.cubic.coeff({2, 0, 0}), Rational(-50448));
  EXPECT_EQ(d.cubic.coeff({1, 0, 0}), Rational(-84888));
  EXPECT_EQ(d.cubic.coeff({0, 0, 0}), Rational(-26521));
  int real = 0;
  for (const auto& c : d.candidates) {
    EXPECT_FALSE(c.admissible);
    if (std::abs(c.S.imag()) < 1e-9) {
      ++real;
      EXPECT_LT(c.V, 0.0);
    }
  }
  EXPECT_EQ(real, 1);
  // the surviving solution sits on the symmetry line and is a swallowtail
  EXPECT_EQ(classify_point(fuchsian(), d.swallowtail).cls, SingularClass::Swallowtail);
}

TEST(Elimination, AgreesWithFloatingEvaluation) {
  const FuchsianEliminationData d = fuchsian_elimination();
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> R(-1.0, 1.0);
  const ExponentData e = fuchsian();
  for (int i = 0; i < 50; ++i) {
    const double u = R(rng), t = R(rng);
    const Complex x(0.5 + u, t);
    const CoefficientValue v = eval_QR(e, x);
    const double f = std::norm(v.Q) - 16 * std::pow(std::norm(x * (1.0 - x)), 2);
    // f(1/2) = 1/2 already, so F carries no extra factor
    EXPECT_NEAR(d.F.eval(u * u, t * t), f, 1e-12 * (1 + std::abs(f)));
    const double g = q3_conj_r2(v).imag() / (t * 2 * u);
    EXPECT_NEAR(d.G_raw.eval(u * u, t * t), g, 1e-9 * (1 + std::abs(g)));
  }
}

TEST(Classify, MirrorInvariance) {
  const ExponentData e = dihedral3();
  const TracedCurve c = trace_singular_curve(e, symmetric_box);
  for (std::size_t i = 0; i < c.x.size(); i += 7) {
    const Complex x = c.x[i];
    EXPECT_EQ(classify_point(e, x).cls, classify_point(e, 1.0 - std::conj(x)).cls);
  }
}

TEST(SelfIntersection, DihedralDottedCurve) {
  const auto inv = parse_case("dihedral:3");
  const auto base = BaseTriangle::for_map(inv);
  const TileLift lift(inv, base, upper_half_plane_tile(inv, base));
  const FrontEvaluator S = [&](Complex x) { return lift.front(x).H; };
  const ExponentData e = inv.exponents();
  const auto st = find_swallowtails(e, trace_singular_curve(e, symmetric_box));
  Complex P;
  for (const auto& p : st)
    if (p.x.imag() > 0) P = p.x;
  ASSERT_GT(P.imag(), 0.2);

  const SelfIntersection si = find_self_intersection(S, 0.004, P.imag() - 0.002, 60);
  EXPECT_LT(si.plane_residual, 1e-9);
  ASSERT_GE(si.levels.size(), 50u);
  for (const auto& L : si.levels) {
    EXPECT_LT(L.distance, 1e-8);
    EXPECT_DOUBLE_EQ((L.x1 + L.x2).real(), 1.0);
  }
  EXPECT_LT(si.levels.back().d, 0.1);
  // near P the offset goes like sqrt(t_P - t) while the gap to C goes like d^2
  const SelfIntersection near = find_self_intersection(S, P.imag() - 2e-4, P.imag() - 1e-5, 6);
  ASSERT_EQ(near.levels.size(), 6u);
  for (const auto& L : near.levels) {
    const auto y = project_to_singular_curve(e, L.x2);
    ASSERT_TRUE(y);
    const double gap = std::abs(*y - L.x2);
    EXPECT_LT(gap, 1e-3);
    EXPECT_LT(gap, 3.0 * L.d * L.d);
  }
  EXPECT_NEAR(si.crossing_angle_deg, 90.0, 2.0);
}

TEST(LocalModels, Examples) {
  const Vec2 c = local_model_cusp(-2, 1);
  EXPECT_EQ(c.x, -3);
  EXPECT_EQ(c.y, -2);
  const Vec3 s = local_model_swallowtail(-2, 1);
  EXPECT_EQ(s.z, 12);
}

TEST(LocalModels, Identities) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> U(-1, 1);
  double worst_cusp = 0, worst_st = 0, printed = 0;
  for (int i = 0; i < 1000; ++i) {
    const double a = U(rng), b = U(rng);
    worst_cusp = std::max(worst_cusp, cusp_discriminant_residual(a, b));
    worst_st = std::max(worst_st, swallowtail_factorization_residual(a, b));
    const Vec2 st = swallowtail_psi(a, b);
    const Vec3 p = swallowtail_Psi_4x2(local_model_swallowtail(st.x, st.y));
    const Vec3 f = swallowtail_normal_form(a, b);
    printed = std::max(printed, std::abs(p.x - f.x - 0.75 * b * b));
  }
  EXPECT_LT(worst_cusp, 1e-12);
  EXPECT_LT(worst_st, 1e-12);
  EXPECT_LT(printed, 1e-12);
}
