#pragma once

// Inverse Schwarz maps with finite (polyhedral) monodromy: rational functions
// x = A0 f0^k0 / fInf^kInf and reflection triples bounding a Schwarz triangle.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsm/mobius.hpp"
#include "hsm/polynomial.hpp"

namespace hsm {

enum class PolyhedralKind { Dihedral, Tetrahedral, Octahedral, Icosahedral };

struct PolyhedralTag {
  PolyhedralKind kind = PolyhedralKind::Dihedral;
  int n = 3;  // dihedral only

  static PolyhedralTag dihedral(int n) { return {PolyhedralKind::Dihedral, n}; }
  static PolyhedralTag tetrahedral() { return {PolyhedralKind::Tetrahedral, 0}; }
  static PolyhedralTag octahedral() { return {PolyhedralKind::Octahedral, 0}; }
  static PolyhedralTag icosahedral() { return {PolyhedralKind::Icosahedral, 0}; }

  std::string str() const {
    switch (kind) {
      case PolyhedralKind::Dihedral: return "dihedral:" + std::to_string(n);
      case PolyhedralKind::Tetrahedral: return "tetra";
      case PolyhedralKind::Octahedral: return "octa";
      default: return "icosa";
    }
  }
};

/// x(z), dx/dz, d2x/dz2.
struct MapJet {
  Complex x, dx, ddx;
};

struct PolyhedralData {
  PolyhedralTag tag;
  int k0 = 0, k1 = 0, kInf = 0;
  int N = 0;
  double A0 = 0, A1 = 0, A = 0;
  std::string A0_exact, A1_exact, A_exact;
  Polynomial f0, f1, fInf;
  /// Printed factorizations (empty when a polynomial is stored unfactored).
  std::vector<Polynomial> f0_factors, f1_factors, fInf_factors;
  std::vector<Complex> fInf_roots;
  /// Whether z = infinity maps to 0, 1 or infinity (degree drop rule).
  int infinity_image = 0;  // 0, 1, or 2 for infinity
};

namespace detail {

inline Polynomial product(const std::vector<Polynomial>& fs) {
  Polynomial p = Polynomial::constant(1.0);
  for (const auto& f : fs) p = p * f;
  return p;
}

/// Multiplies the printed factors and compares against the printed expansion.
inline Polynomial checked_product(const std::vector<Polynomial>& factors, const Polynomial& expanded,
                                  const char* what) {
  const Polynomial p = product(factors);
  if (Polynomial::max_coeff_diff(p, expanded) > 1e-13)
    throw std::logic_error(std::string("build_polyhedral: factorization mismatch for ") + what);
  return p;
}

}  // namespace detail

inline PolyhedralData build_polyhedral(const PolyhedralTag& tag) {
  using P = Polynomial;
  PolyhedralData d;
  d.tag = tag;
  const double s3 = std::sqrt(3.0);
  switch (tag.kind) {
    case PolyhedralKind::Dihedral: {
      if (tag.n < 1) throw std::domain_error("build_polyhedral: dihedral requires n >= 1");
      const int n = tag.n;
      d.k0 = 2;
      d.k1 = 2;
      d.kInf = n;
      d.N = 2 * n;
      d.A0 = 0.25;
      d.A1 = -0.25;
      d.A = n / 4.0;
      d.A0_exact = "1/4";
      d.A1_exact = "-1/4";
      d.A_exact = std::to_string(n) + "/4";
      d.f0 = P::monomial(n) + P::constant(1.0);
      d.f1 = P::monomial(n) - P::constant(1.0);
      d.fInf = P::monomial(1);
      d.infinity_image = 2;
      break;
    }
    case PolyhedralKind::Tetrahedral: {
      d.k0 = 2;
      d.k1 = 3;
      d.kInf = 3;
      d.N = 12;
      d.A0 = -12.0 * s3;
      d.A1 = 1.0;
      d.A = 24.0 * s3;
      d.A0_exact = "-12*sqrt(3)";
      d.A1_exact = "1";
      d.A_exact = "24*sqrt(3)";
      d.f0 = P::descending({1, 0, 0, 0, 1, 0});
      d.f1_factors = {P::descending({1, 0, -2 + s3}), P::descending({1, 0, 2 + s3})};
      d.fInf_factors = {P::descending({1, 0, -2 - s3}), P::descending({1, 0, 2 - s3})};
      d.f1 = detail::checked_product(d.f1_factors, P::descending({1, 0, 2 * s3, 0, -1}), "f1");
      d.fInf = detail::checked_product(d.fInf_factors, P::descending({1, 0, -2 * s3, 0, -1}), "fInf");
      d.infinity_image = 0;
      break;
    }
    case PolyhedralKind::Octahedral: {
      d.k0 = 3;
      d.k1 = 2;
      d.kInf = 4;
      d.N = 24;
      d.A0 = 1.0 / 108.0;
      d.A1 = -1.0 / 108.0;
      d.A = 1.0 / 27.0;
      d.A0_exact = "1/108";
      d.A1_exact = "-1/108";
      d.A_exact = "1/27";
      d.f0_factors = {P::descending({1, 2, 2, -2, 1}), P::descending({1, -2, 2, 2, 1})};
      d.f1_factors = {P::descending({1, 0, 0, 0, 1}), P::descending({1, 2, -1}), P::descending({1, -2, -1}),
                      P::descending({1, 0, 6, 0, 1})};
      d.fInf_factors = {P::monomial(1), P::descending({1, 0, 1}), P::descending({1, 0, -1})};
      d.f0 = detail::checked_product(d.f0_factors, P::descending({1, 0, 0, 0, 14, 0, 0, 0, 1}), "f0");
      d.f1 = detail::checked_product(d.f1_factors,
                                     P::descending({1, 0, 0, 0, -33, 0, 0, 0, -33, 0, 0, 0, 1}), "f1");
      d.fInf = detail::checked_product(d.fInf_factors, P::descending({1, 0, 0, 0, -1, 0}), "fInf");
      d.infinity_image = 2;
      break;
    }
    case PolyhedralKind::Icosahedral: {
      d.k0 = 3;
      d.k1 = 2;
      d.kInf = 5;
      d.N = 60;
      d.A0 = -1.0 / 1728.0;
      d.A1 = 1.0 / 1728.0;
      d.A = -5.0 / 1728.0;
      d.A0_exact = "-1/1728";
      d.A1_exact = "1/1728";
      d.A_exact = "-5/1728";
      d.f0_factors = {P::descending({1, -3, -1, 3, 1}), P::descending({1, -1, 7, 7, 0, -7, 7, 1, 1}),
                      P::descending({1, 4, 7, 2, 15, -2, 7, -4, 1})};
      d.f1_factors = {P::descending({1, 0, 1}), P::descending({1, 0, -1, 0, 1, 0, -1, 0, 1}),
                      P::descending({1, 2, -6, -2, 1}), P::descending({1, 4, 17, 22, 5, -22, 17, -4, 1}),
                      P::descending({1, -6, 17, -18, 25, 18, 17, 6, 1})};
      d.fInf_factors = {P::monomial(1), P::descending({1, 1, -1}), P::descending({1, 2, 4, 3, 1}),
                        P::descending({1, -3, 4, -2, 1})};
      std::vector<Complex> e0(21, 0.0), e1(31, 0.0), eI(12, 0.0);
      e0[20] = 1; e0[15] = -228; e0[10] = 494; e0[5] = 228; e0[0] = 1;
      e1[30] = 1; e1[25] = 522; e1[20] = -10005; e1[10] = -10005; e1[5] = -522; e1[0] = 1;
      eI[11] = 1; eI[6] = 11; eI[1] = -1;
      d.f0 = detail::checked_product(d.f0_factors, P(e0), "f0");
      d.f1 = detail::checked_product(d.f1_factors, P(e1), "f1");
      d.fInf = detail::checked_product(d.fInf_factors, P(eI), "fInf");
      d.infinity_image = 2;
      break;
    }
  }
  d.fInf_roots = polynomial_roots(d.fInf);
  return d;
}

inline constexpr double pole_tolerance = 1e-8;

namespace detail {

inline Complex ipow(Complex z, int e) {
  Complex r = 1.0;
  Complex b = z;
  for (int k = e; k > 0; k >>= 1) {
    if (k & 1) r *= b;
    b *= b;
  }
  return r;
}

inline void check_pole(const PolyhedralData& d, Complex z) {
  for (const Complex& r : d.fInf_roots)
    if (std::abs(z - r) <= pole_tolerance)
      throw std::domain_error("eval_polyhedral_x: z is within 1e-8 of the root " + std::to_string(r.real()) +
                              (r.imag() < 0 ? "" : "+") + std::to_string(r.imag()) + "i of fInf");
}

}  // namespace detail

/// x from the defining quotient; dx from the closed form with constant A; d2x
/// by the product rule applied to that closed form.
inline MapJet eval_polyhedral_x(const PolyhedralData& d, Complex z) {
  detail::check_pole(d, z);
  const Jet j0 = d.f0.jet(z), j1 = d.f1.jet(z), jI = d.fInf.jet(z);
  using detail::ipow;
  MapJet r;
  r.x = d.A0 * ipow(j0.p, d.k0) / ipow(jI.p, d.kInf);
  const Complex a = ipow(j0.p, d.k0 - 1), b = ipow(j1.p, d.k1 - 1);
  const Complex inv = 1.0 / ipow(jI.p, d.kInf + 1);
  r.dx = d.A * a * b * inv;
  // d/dz [f0^(k0-1) f1^(k1-1) fInf^-(kInf+1)]
  const Complex da = d.k0 >= 2 ? static_cast<double>(d.k0 - 1) * ipow(j0.p, d.k0 - 2) * j0.dp : 0.0;
  const Complex db = d.k1 >= 2 ? static_cast<double>(d.k1 - 1) * ipow(j1.p, d.k1 - 2) * j1.dp : 0.0;
  r.ddx = d.A * inv * (da * b + a * db - static_cast<double>(d.kInf + 1) * a * b * jI.dp / jI.p);
  return r;
}

/// dx/dz by the quotient rule on A0 f0^k0 / fInf^kInf, independent of A and f1.
inline Complex polyhedral_dx_quotient_rule(const PolyhedralData& d, Complex z) {
  detail::check_pole(d, z);
  const Jet j0 = d.f0.jet(z), jI = d.fInf.jet(z);
  using detail::ipow;
  const Complex num = static_cast<double>(d.k0) * ipow(j0.p, d.k0 - 1) * j0.dp * jI.p -
                      static_cast<double>(d.kInf) * ipow(j0.p, d.k0) * jI.dp;
  return d.A0 * num / ipow(jI.p, d.kInf + 1);
}

/// A0 f0^k0 + A1 f1^k1 - fInf^kInf, relative to the largest term.
inline double partition_of_unity_residual(const PolyhedralData& d, Complex z) {
  using detail::ipow;
  const Complex a = d.A0 * ipow(d.f0(z), d.k0), b = d.A1 * ipow(d.f1(z), d.k1), c = ipow(d.fInf(z), d.kInf);
  return std::abs(a + b - c) / std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
}

// ---------------------------------------------------------------------------

/// Mirrors of a Schwarz triangle; R1 is always z -> conj z.
struct ReflectionTriple {
  std::array<MobiusMap, 3> R;
  std::array<std::string, 3> description;
};

inline ReflectionTriple reflection_triple(const PolyhedralTag& tag) {
  ReflectionTriple t;
  t.R[0] = MobiusMap::line_reflection(0.0);
  t.description[0] = "z -> conj(z)";
  switch (tag.kind) {
    case PolyhedralKind::Dihedral:
      t.R[1] = MobiusMap::line_reflection(2 * pi / tag.n);
      t.R[2] = MobiusMap::circle_reflection(0.0, 1.0);
      t.description[1] = "z -> exp(2 pi i/" + std::to_string(tag.n) + ") conj(z)";
      t.description[2] = "z -> 1/conj(z)";
      break;
    case PolyhedralKind::Tetrahedral:
      t.R[1] = MobiusMap::line_reflection(pi);
      t.R[2] = MobiusMap::circle_reflection(-Complex(1.0, 1.0) / std::sqrt(2.0), std::sqrt(2.0));
      t.description[1] = "z -> -conj(z)";
      t.description[2] = "R(-(1+i)/sqrt2, sqrt2)";
      break;
    case PolyhedralKind::Octahedral:
      t.R[1] = MobiusMap::line_reflection(pi / 2);
      t.R[2] = MobiusMap::circle_reflection(-1.0, std::sqrt(2.0));
      t.description[1] = "z -> i conj(z)";
      t.description[2] = "R(-1, sqrt2)";
      break;
    case PolyhedralKind::Icosahedral: {
      // Mirror at angle pi/5 and the circle with center -2cos(pi/5); see README.
      const double c5 = std::cos(pi / 5);
      t.R[1] = MobiusMap::line_reflection(2 * pi / 5);
      t.R[2] = MobiusMap::circle_reflection(-2.0 * c5, std::sqrt(1.0 + 4.0 * c5 * c5));
      t.description[1] = "z -> eps conj(z)";
      t.description[2] = "R(-2cos(pi/5), sqrt(1+4cos^2(pi/5)))";
      break;
    }
  }
  return t;
}

/// Opening angle at z = 0 of the triangle bounded by the real axis, the R2 mirror and the R3 circle.
inline double sector_angle(const PolyhedralTag& tag) {
  switch (tag.kind) {
    case PolyhedralKind::Dihedral: return pi / tag.n;
    case PolyhedralKind::Tetrahedral: return pi / 2;
    case PolyhedralKind::Octahedral: return pi / 4;
    default: return pi / 5;
  }
}

/// Distance from 0 to the R3 circle along the ray at angle theta (0 lies inside the circle).
inline double ray_to_circle(const MobiusMap& circle, double theta) {
  // Recover center and radius from the matrix [[c, r^2-|c|^2], [1, -conj c]] up to scale.
  const Complex c = circle.m.a / circle.m.c;
  const double r2 = (circle.m.b / circle.m.c).real() + std::norm(c);
  const double bcoef = (std::conj(c) * std::polar(1.0, theta)).real();
  const double disc = bcoef * bcoef - (std::norm(c) - r2);
  return bcoef + std::sqrt(disc);
}

}  // namespace hsm
