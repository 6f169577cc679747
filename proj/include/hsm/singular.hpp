#pragma once

// Singularities of the front: the singular curve |Q| = 4|x(1-x)|^2, the
// cuspidal-edge / swallowtail tests in terms of Q and R, the exact
// elimination for mu = (0,0,0), self-intersections of symmetric cases and
// the local normal forms.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsm/h3geom.hpp"
#include "hsm/hgde.hpp"
#include "hsm/polynomial.hpp"
#include "hsm/rational.hpp"

namespace hsm {

enum class SingularClass { CuspidalEdge, Swallowtail, HigherDegenerate, NotSingular };

inline std::string to_string(SingularClass c) {
  switch (c) {
    case SingularClass::CuspidalEdge: return "cuspidal_edge";
    case SingularClass::Swallowtail: return "swallowtail";
    case SingularClass::HigherDegenerate: return "higher_degenerate";
    case SingularClass::NotSingular: return "not_singular";
  }
  return "?";
}

struct SingularTolerance {
  double on_curve = 1e-8;    // | |q| - 1 |
  double real_test = 1e-9;   // relative, for "non-positive real"
  double degenerate = 1e-9;  // relative, for the swallowtail real part
};

struct SingularPointClass {
  Complex x;
  SingularClass cls = SingularClass::NotSingular;
  double abs_q = 0.0;
  Complex q3r2;             // Q^3 conj(R)^2
  Complex swallowtail_expr;  // 2|R|^4 - x(1-x)(2R'Q - RQ') conj(R)^2
};

inline bool is_nonpositive_real(Complex z, double tol) {
  const double a = std::abs(z);
  return std::abs(z.imag()) <= tol * a && z.real() <= tol * a;
}

inline Complex q3_conj_r2(const CoefficientValue& v) {
  const Complex rb = std::conj(v.R);
  return v.Q * v.Q * v.Q * rb * rb;
}

inline Complex swallowtail_expression(const CoefficientValue& v) {
  const Complex A = v.x * (1.0 - v.x);
  const Complex rb = std::conj(v.R);
  return 2.0 * std::pow(std::norm(v.R), 2) - A * (2.0 * v.dR * v.Q - v.R * v.dQ) * rb * rb;
}

inline SingularPointClass classify_point(const ExponentData& e, Complex x, SingularTolerance tol = {}) {
  const CoefficientValue v = eval_q(e, x);
  SingularPointClass c;
  c.x = x;
  c.abs_q = std::abs(v.q);
  c.q3r2 = q3_conj_r2(v);
  c.swallowtail_expr = swallowtail_expression(v);
  if (std::abs(c.abs_q - 1.0) > tol.on_curve) {
    c.cls = SingularClass::NotSingular;
    return c;
  }
  const bool r_nonzero = std::abs(v.R) > tol.real_test * (1.0 + std::abs(v.Q));
  if (r_nonzero && !is_nonpositive_real(c.q3r2, tol.real_test)) {
    c.cls = SingularClass::CuspidalEdge;
    return c;
  }
  const Complex A = x * (1.0 - x);
  const Complex rb = std::conj(v.R);
  const double scale = 2.0 * std::pow(std::norm(v.R), 2) + std::abs(A * (2.0 * v.dR * v.Q - v.R * v.dQ) * rb * rb);
  c.cls = std::abs(c.swallowtail_expr.real()) > tol.degenerate * scale && scale > 0.0 ? SingularClass::Swallowtail
                                                                                       : SingularClass::HigherDegenerate;
  return c;
}

// ---------------------------------------------------------------------------
// The singular curve

/// f = |Q|^2 - 16|x(1-x)|^4 and its gradient written as df/ds + i df/dt.
struct SingularFunction {
  double f;
  Complex grad;
};

inline SingularFunction singular_function(const ExponentData& e, Complex x) {
  const CoefficientValue v = eval_QR(e, x);
  const Complex A = x * (1.0 - x), dA = 1.0 - 2.0 * x;
  const double nA = std::norm(A);
  const Complex g = v.dQ * std::conj(v.Q) - 32.0 * nA * dA * std::conj(A);
  return {std::norm(v.Q) - 16.0 * nA * nA, 2.0 * std::conj(g)};
}

/// Newton projection onto f = 0 along the gradient.
inline std::optional<Complex> project_to_singular_curve(const ExponentData& e, Complex x, double ftol = 1e-13,
                                                        int max_iter = 40) {
  for (int it = 0; it < max_iter; ++it) {
    const SingularFunction s = singular_function(e, x);
    const double scale = 1.0 + std::norm(eval_QR(e, x).Q);
    if (std::abs(s.f) <= ftol * scale) return x;
    const double g2 = std::norm(s.grad);
    if (g2 == 0.0 || !std::isfinite(g2)) return std::nullopt;
    x -= s.f * s.grad / g2;
  }
  const SingularFunction s = singular_function(e, x);
  if (std::abs(s.f) <= 1e2 * ftol * (1.0 + std::norm(eval_QR(e, x).Q))) return x;
  return std::nullopt;
}

struct SeedBox {
  Complex lo, hi;
};

struct TraceOptions {
  double h_min = 1e-4;
  double h_max = 1e-2;
  double close_tol = 1e-6;
  std::size_t max_points = 200000;
  double escape_radius = 1e3;
};

struct TracedCurve {
  std::vector<Complex> x;
  std::vector<double> s;  // arclength
  bool closed = false;
  double closure_gap = 0.0;
};

namespace detail {

inline Complex unit_tangent(const ExponentData& e, Complex x) {
  const Complex g = singular_function(e, x).grad;
  return I * g / std::abs(g);
}

inline std::optional<Complex> bisect_singular(const ExponentData& e, Complex a, Complex b) {
  double fa = singular_function(e, a).f;
  for (int it = 0; it < 200 && std::abs(b - a) > 1e-15 * (1 + std::abs(a)); ++it) {
    const Complex m = 0.5 * (a + b);
    const double fm = singular_function(e, m).f;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return project_to_singular_curve(e, 0.5 * (a + b));
}

}  // namespace detail

/// Zero of f on the vertical or horizontal midline of the box; the vertical
/// midline is scanned first so symmetric boxes seed on the symmetry line.
inline std::optional<Complex> seed_singular_curve(const ExponentData& e, SeedBox box, int samples = 256) {
  const Complex c = 0.5 * (box.lo + box.hi);
  const std::array<std::pair<Complex, Complex>, 2> lines{
      std::pair{Complex(c.real(), box.lo.imag()), Complex(c.real(), box.hi.imag())},
      std::pair{Complex(box.lo.real(), c.imag()), Complex(box.hi.real(), c.imag())}};
  for (const auto& [a, b] : lines) {
    Complex prev = a;
    double fp = singular_function(e, a).f;
    for (int k = 1; k <= samples; ++k) {
      const Complex p = a + (b - a) * (static_cast<double>(k) / samples);
      const double fk = singular_function(e, p).f;
      if ((fk < 0) != (fp < 0))
        if (auto r = detail::bisect_singular(e, prev, p)) return r;
      prev = p;
      fp = fk;
    }
  }
  return std::nullopt;
}

/// Predictor-corrector continuation of f = 0 from a seed in the box.
inline TracedCurve trace_singular_curve(const ExponentData& e, SeedBox box, TraceOptions opt = {}) {
  TracedCurve out;
  const auto seed = seed_singular_curve(e, box);
  if (!seed) return out;
  const Complex x0 = *seed;
  const Complex tau0 = detail::unit_tangent(e, x0);
  out.x.push_back(x0);
  out.s.push_back(0.0);
  Complex x = x0, tau = tau0;
  double h = opt.h_max * 0.5, arc = 0.0;
  while (out.x.size() < opt.max_points) {
    const Complex to_start = x0 - x;
    const double dist = std::abs(to_start);
    const bool heading_home = arc > 20 * opt.h_max && (to_start * std::conj(tau)).real() > 0.0 &&
                              (tau * std::conj(tau0)).real() > 0.5;
    double step = h;
    if (heading_home && dist < 4 * opt.h_max) {
      // shrink geometrically toward the start, then close
      if (dist <= 2 * opt.h_min) {
        const double along = (to_start * std::conj(tau)).real();
        const auto y = project_to_singular_curve(e, x + along * tau);
        out.closure_gap = y ? std::abs(*y - x0) : dist;
        out.closed = out.closure_gap < opt.close_tol;
        if (out.closed) break;
      }
      step = std::min(step, std::max(opt.h_min, 0.25 * dist));
    }
    const auto y = project_to_singular_curve(e, x + step * tau);
    if (!y || std::abs(*y - x) > 2 * step) {
      if (h <= opt.h_min) break;
      h = std::max(opt.h_min, 0.5 * h);
      continue;
    }
    const Complex ty = detail::unit_tangent(e, *y);
    const double turn = std::abs(std::arg(ty * std::conj(tau)));
    if (turn > 0.1 && h > opt.h_min) {
      h = std::max(opt.h_min, 0.5 * h);
      continue;
    }
    arc += std::abs(*y - x);
    x = *y;
    tau = ty;
    out.x.push_back(x);
    out.s.push_back(arc);
    if (std::abs(x) > opt.escape_radius) break;
    if (turn < 0.025) h = std::min(opt.h_max, 1.5 * h);
  }
  return out;
}

/// Largest distance from the mirror image 1 - conj(p) of a traced point to
/// the traced branch, measured along the normal line through the mirror point.
inline double symmetry_defect(const ExponentData& e, const TracedCurve& c) {
  double worst = 0.0;
  for (Complex p : c.x) {
    const Complex m = 1.0 - std::conj(p);
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c.x.size(); ++j)
      if (double d = std::abs(c.x[j] - m); d < bd) {
        bd = d;
        best = j;
      }
    // solve f(y) = 0, (y - m).tau = 0 from the nearest sample
    const Complex tau = detail::unit_tangent(e, c.x[best]);
    Complex y = c.x[best];
    for (int it = 0; it < 30; ++it) {
      const SingularFunction s = singular_function(e, y);
      const double r1 = s.f, r2 = ((y - m) * std::conj(tau)).real();
      // rows: grad f . (ds,dt) = -r1, tau . (ds,dt) = -r2
      const double a = s.grad.real(), b = s.grad.imag(), cc = tau.real(), d = tau.imag();
      const double det = a * d - b * cc;
      if (det == 0.0) break;
      const double ds = (-r1 * d + r2 * b) / det, dt = (-a * r2 + cc * r1) / det;
      y += Complex(ds, dt);
      if (std::hypot(ds, dt) < 1e-16) break;
    }
    worst = std::max(worst, std::abs(y - m));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Swallowtails

namespace detail {

inline double normalized_im(const ExponentData& e, Complex x) {
  const Complex z = q3_conj_r2(eval_QR(e, x));
  const double a = std::abs(z);
  return a == 0.0 ? 0.0 : z.imag() / a;
}

}  // namespace detail

/// Sign changes of Im(Q^3 conj R^2) along the curve, refined by bisection on
/// the curve and kept when Q^3 conj R^2 is non-positive real there.
inline std::vector<SingularPointClass> find_swallowtails(const ExponentData& e, const TracedCurve& c,
                                                         SingularTolerance tol = {}) {
  std::vector<SingularPointClass> out;
  const std::size_t n = c.x.size();
  if (n < 2) return out;
  const std::size_t segs = c.closed ? n : n - 1;
  for (std::size_t i = 0; i < segs; ++i) {
    const Complex a = c.x[i], b = c.x[(i + 1) % n];
    double ga = detail::normalized_im(e, a);
    const double gb = detail::normalized_im(e, b);
    if (ga == 0.0 || (ga < 0) == (gb < 0)) {
      if (ga != 0.0) continue;
    }
    double lo = 0.0, hi = 1.0;
    Complex p = a;
    if (ga != 0.0) {
      for (int it = 0; it < 100 && (hi - lo) * std::abs(b - a) > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto pm = project_to_singular_curve(e, a + mid * (b - a));
        if (!pm) break;
        const double gm = detail::normalized_im(e, *pm);
        if ((gm < 0) == (ga < 0)) {
          lo = mid;
          ga = gm;
        } else {
          hi = mid;
        }
      }
      const auto pf = project_to_singular_curve(e, a + 0.5 * (lo + hi) * (b - a));
      if (!pf) continue;
      p = *pf;
    }
    const SingularPointClass k = classify_point(e, p, tol);
    if (!is_nonpositive_real(k.q3r2, std::max(tol.real_test, 1e-7))) continue;
    if (k.cls == SingularClass::Swallowtail || k.cls == SingularClass::HigherDegenerate) {
      bool dup = false;
      for (const auto& o : out) dup = dup || std::abs(o.x - k.x) < 1e-9;
      if (!dup) out.push_back(k);
    }
  }
  return out;
}

/// Direct 2-D Newton on f = 0, Im(Q^3 conj R^2) = 0.
inline Complex swallowtail_newton(const ExponentData& e, Complex x, int max_iter = 60) {
  for (int it = 0; it < max_iter; ++it) {
    const CoefficientValue v = eval_QR(e, x);
    const SingularFunction s = singular_function(e, x);
    const Complex rb = std::conj(v.R);
    const Complex Z = v.Q * v.Q * v.Q * rb * rb;
    const Complex Zx = 3.0 * v.Q * v.Q * v.dQ * rb * rb;
    const Complex Zxb = 2.0 * v.Q * v.Q * v.Q * rb * std::conj(v.dR);
    const Complex Zs = Zx + Zxb, Zt = I * (Zx - Zxb);
    const double a = s.grad.real(), b = s.grad.imag(), c = Zs.imag(), d = Zt.imag();
    const double det = a * d - b * c;
    if (det == 0.0) throw std::runtime_error("swallowtail_newton: singular Jacobian");
    const double r1 = s.f, r2 = Z.imag();
    const double ds = (-r1 * d + r2 * b) / det, dt = (-a * r2 + c * r1) / det;
    x += Complex(ds, dt);
    if (std::hypot(ds, dt) < 1e-16 * (1 + std::abs(x))) return x;
  }
  const SingularFunction s = singular_function(e, x);
  if (std::abs(s.f) < 1e-13) return x;
  throw std::runtime_error("swallowtail_newton: no convergence");
}

// ---------------------------------------------------------------------------
// Exact elimination for mu = (0,0,0)

struct EliminationCandidate {
  Complex S;
  double V = 0.0, U = 0.0, T = 0.0;
  bool admissible = false;  // real S with U, T >= 0
};

struct FuchsianEliminationData {
  // variables: F, G in (U, T, -); G1, F1 in (S, V, -)
  MPoly F, G_raw, G, G1_UT, G1, F_SV, F1;
  MPoly F_printed, G_printed, G1_printed;
  Rational calibration_F, calibration_G;
  MPoly V_num, V_den;  // V = V_num / V_den, univariate in S
  MPoly cubic;         // primitive integer numerator in S
  std::vector<Complex> cubic_roots;
  std::vector<EliminationCandidate> candidates;
  MPoly symmetric_branch;  // F(0, T)
  double symmetric_T = 0.0;
  Complex swallowtail;  // 1/2 + i sqrt(symmetric_T)
};

namespace detail {

/// Rewrites a polynomial in (U, T) through U = S + T, T^2 = V - S T; the result
/// must be free of T.
inline MPoly to_sv(const MPoly& p) {
  const MPoly S = MPoly::var(0), V = MPoly::var(1), T = MPoly::var(2);
  MPoly q = p.substitute(1, T).substitute(0, S + T);
  while (q.degree_in(2) >= 2) {
    MPoly r;
    for (const auto& [ex, c] : q.terms()) {
      if (ex[2] >= 2) {
        MPoly::Exponent f = ex;
        f[2] -= 2;
        r = r + MPoly::term(f, c) * (V - S * T);
      } else {
        r = r + MPoly::term(ex, c);
      }
    }
    q = r;
  }
  if (q.degree_in(2) > 0) throw std::logic_error("to_sv: polynomial is not a function of S and V");
  return q;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Scales to coprime integer coefficients with positive leading term in var 0.
inline MPoly primitive(const MPoly& p) {
  if (p.is_zero()) return p;
  std::int64_t l = 1;
  for (const auto& [e, c] : p.terms()) l = l / gcd64(l, c.den()) * c.den();
  MPoly q = p * MPoly(Rational(l));
  std::int64_t g = 0;
  for (const auto& [e, c] : q.terms()) g = gcd64(g, c.num());
  const auto lead = std::prev(q.terms().end())->second;
  return q * MPoly(Rational(lead.num() < 0 ? -1 : 1, g));
}

}  // namespace detail

inline FuchsianEliminationData fuchsian_elimination() {
  FuchsianEliminationData d;
  const MPoly u = MPoly::var(0), t = MPoly::var(1);
  const GaussianMPoly x{MPoly(Rational(1, 2)) + u, t};
  const GaussianMPoly one{MPoly(Rational(1)), MPoly()};
  // Q and R from the exponent formulas with mu = (0,0,0)
  const Rational m0(0), m1(0), mi(0);
  const Rational c0 = Rational(1) - m0 * m0, c1 = mi * mi + m0 * m0 - m1 * m1 - Rational(1), c2 = Rational(1) - mi * mi;
  const GaussianMPoly Q = GaussianMPoly{MPoly(c0), MPoly()} + GaussianMPoly{MPoly(c1), MPoly()} * x +
                          GaussianMPoly{MPoly(c2), MPoly()} * x * x;
  const GaussianMPoly dQ = GaussianMPoly{MPoly(c1), MPoly()} + GaussianMPoly{MPoly(c2 * Rational(2)), MPoly()} * x;
  const GaussianMPoly A = x * (one - x);
  const GaussianMPoly two_x_minus_one = GaussianMPoly{MPoly(Rational(2)), MPoly()} * x - one;
  const GaussianMPoly R = dQ * A + GaussianMPoly{MPoly(Rational(2)), MPoly()} * Q * two_x_minus_one;

  const MPoly f = Q.norm() - MPoly(Rational(16)) * A.norm() * A.norm();
  d.F = f.compress(0, 2).compress(1, 2);
  const MPoly h = (Q.pow(3) * R.conj().pow(2)).im;
  // Im(Q^3 conj R^2) = t (2s - 1) G with 2s - 1 = 2u
  d.G_raw = (h.divide_by_var(1).divide_by_var(0) * MPoly(Rational(1, 2))).compress(0, 2).compress(1, 2);

  const MPoly U = MPoly::var(0), T = MPoly::var(1);
  const auto R_ = [](std::int64_t n, std::int64_t m = 1) { return MPoly(Rational(n, m)); };
  d.F_printed = R_(1, 2) + R_(5, 2) * (U - T) - R_(5) * (U.pow(2) + T.pow(2)) + R_(6) * T * U +
                R_(16) * (T * U.pow(2) - T.pow(2) * U) + R_(16) * (U.pow(3) - T.pow(3)) -
                R_(16) * (U.pow(4) + T.pow(4)) - R_(64) * (T.pow(3) * U - T * U.pow(3)) - R_(96) * T.pow(2) * U.pow(2);
  d.G_printed = R_(1323, 256) + R_(189, 16) * (U - T) + R_(9, 8) * (U.pow(2) + T.pow(2)) - R_(99, 4) * T * U +
                R_(11) * (T.pow(3) - U.pow(3)) + R_(11) * (T.pow(2) * U - T * U.pow(2)) -
                R_(5) * (U.pow(4) - T.pow(4)) - R_(20) * (T.pow(3) * U + T * U.pow(3)) - R_(30) * T.pow(2) * U.pow(2);
  const MPoly S = MPoly::var(0), V = MPoly::var(1);
  d.G1_printed = R_(-1283, 16) + R_(256) * S.pow(3) - R_(43) * S.pow(2) + R_(1024) * V * S - R_(353, 2) * S +
                 R_(340) * V;

  // one-point calibration on the constant terms
  d.calibration_F = d.F_printed.coeff({0, 0, 0}) / d.F.coeff({0, 0, 0});
  d.calibration_G = d.G_printed.coeff({0, 0, 0}) / d.G_raw.coeff({0, 0, 0});
  d.F = d.F * MPoly(d.calibration_F);
  d.G = d.G_raw * MPoly(d.calibration_G);

  d.G1_UT = MPoly(Rational(5)) * d.F - MPoly(Rational(16)) * d.G;
  d.G1 = detail::to_sv(d.G1_UT);
  d.F_SV = detail::to_sv(d.F);
  d.F1 = MPoly(Rational(256)) * d.F_SV - MPoly(Rational(16)) * d.G1;
  if (d.G1.degree_in(1) > 1) throw std::logic_error("fuchsian_elimination: G1 is not linear in V");

  // V = -a(S)/b(S) from G1 = a + b V; substitute into F1 = c0 + c1 V + c2 V^2
  const MPoly a = d.G1.coefficient_of(1, 0), b = d.G1.coefficient_of(1, 1);
  d.V_num = -a;
  d.V_den = b;
  const MPoly k0 = d.F1.coefficient_of(1, 0), k1 = d.F1.coefficient_of(1, 1), k2 = d.F1.coefficient_of(1, 2);
  d.cubic = detail::primitive(k0 * b * b - k1 * a * b + k2 * a * a);

  d.cubic_roots = polynomial_roots(d.cubic.to_univariate(0));
  for (Complex r : d.cubic_roots) {
    EliminationCandidate c;
    c.S = r;
    if (std::abs(r.imag()) <= 1e-9 * std::max(1.0, std::abs(r))) {
      const double s = r.real();
      c.V = d.V_num.eval(s) / d.V_den.eval(s);
      const double disc = s * s + 4 * c.V;
      if (disc >= 0) {
        c.T = 0.5 * (-s + std::sqrt(disc));
        c.U = c.T + s;
        c.admissible = c.T >= 0 && c.U >= 0 && c.V >= 0;
      }
    }
    d.candidates.push_back(c);
  }

  // the symmetry line u = 0 carries the factor 2s - 1 of Im(Q^3 conj R^2)
  d.symmetric_branch = d.F.substitute(0, MPoly());
  const Polynomial fb = d.symmetric_branch.to_univariate(1);
  double best = -1;
  for (Complex r : polynomial_roots(fb))
    if (std::abs(r.imag()) < 1e-9 && r.real() > 0) best = r.real();
  if (best < 0) throw std::logic_error("fuchsian_elimination: no positive root on the symmetry line");
  for (int it = 0; it < 5; ++it) {
    const Jet j = fb.jet(best);
    best -= (j.p / j.dp).real();
  }
  d.symmetric_T = best;
  d.swallowtail = Complex(0.5, std::sqrt(best));
  return d;
}

/// Both sides of the closed form of the swallowtail real part on Re x = 1/2.
struct SymmetryLineCheck {
  Complex lhs;
  double rhs;
};

inline SymmetryLineCheck symmetry_line_swallowtail_expression(double t) {
  const ExponentData e = exponents_from_orders(0, 0, 0);
  const CoefficientValue v = eval_QR(e, Complex(0.5, t));
  const double t2 = t * t;
  const double rhs = t2 * std::pow(7 - 4 * t2, 2) * (21 + 440 * t2 - 560 * t2 * t2 + 256 * t2 * t2 * t2) / 64.0;
  return {swallowtail_expression(v), rhs};
}

// ---------------------------------------------------------------------------
// Self-intersection of symmetric fronts

using FrontEvaluator = std::function<HermitianForm(Complex)>;

struct SelfIntersectionLevel {
  double t = 0.0, d = 0.0;
  double distance = 0.0;  // between the images of 1/2 -+ d + it
  Complex x1, x2;
};

struct SelfIntersectionOptions {
  double d_min = 1e-4;
  double d_max = 1.2;
  int scan = 160;
  double coincidence = 1e-8;
};

struct SelfIntersection {
  std::vector<SelfIntersectionLevel> levels;
  std::vector<double> skipped;
  Lorentz normal{0, 0, 0, 0};  // plane fixed by the symmetry
  double plane_residual = 0.0;
  double crossing_angle_deg = 0.0;
  TracedCurve curve;  // right branch 1/2 + d + it
};

namespace detail {

inline Lorentz lorentz_of(const HermitianForm& H) { return hermitian_to_lorentz(H).as_lorentz(); }

/// n with <n, p_i> = 0 (Lorentz) for three points, normalized spacelike.
inline Lorentz lorentz_normal(const Lorentz& a, const Lorentz& b, const Lorentz& c) {
  // Euclidean cross product in R^4 of the rows, then undo the metric
  const double A[3][4] = {{a.x0, a.x1, a.x2, a.x3}, {b.x0, b.x1, b.x2, b.x3}, {c.x0, c.x1, c.x2, c.x3}};
  auto minor = [&](int skip) {
    int col[3], k = 0;
    for (int j = 0; j < 4; ++j)
      if (j != skip) col[k++] = j;
    return A[0][col[0]] * (A[1][col[1]] * A[2][col[2]] - A[1][col[2]] * A[2][col[1]]) -
           A[0][col[1]] * (A[1][col[0]] * A[2][col[2]] - A[1][col[2]] * A[2][col[0]]) +
           A[0][col[2]] * (A[1][col[0]] * A[2][col[1]] - A[1][col[1]] * A[2][col[0]]);
  };
  const double m[4] = {-minor(0), minor(1), -minor(2), minor(3)};
  Lorentz n{m[0], -m[1], -m[2], -m[3]};
  const double nn = -lorentz_dot(n, n);
  if (!(nn > 0)) throw std::runtime_error("self-intersection: symmetry plane is not spacelike");
  const double s = 1.0 / std::sqrt(nn);
  return {n.x0 * s, n.x1 * s, n.x2 * s, n.x3 * s};
}

}  // namespace detail

/// On each level Im x = t, finds d > 0 with S(1/2 - d + it) = S(1/2 + d + it).
/// The symmetry x -> 1 - conj(x) acts on the front as a reflection in a plane
/// through the image of Re x = 1/2, so coincidence means the image of
/// 1/2 - d + it lies on that plane; the signed pairing with its normal is
/// bisected.
inline SelfIntersection find_self_intersection(const FrontEvaluator& S, double t_lo, double t_hi, int nlevels,
                                               SelfIntersectionOptions opt = {}) {
  SelfIntersection out;
  const double span = std::max(t_hi, 0.2);
  std::vector<Lorentz> line;
  for (double tau : {0.25 * span, 0.6 * span, 1.1 * span, 0.4 * span, 0.8 * span, 1.5 * span})
    line.push_back(detail::lorentz_of(S(Complex(0.5, tau))));
  out.normal = detail::lorentz_normal(line[0], line[1], line[2]);
  for (std::size_t k = 3; k < line.size(); ++k)
    out.plane_residual = std::max(out.plane_residual, std::abs(lorentz_dot(line[k], out.normal)) / line[k].x0);

  auto g = [&](double t, double d) -> std::optional<double> {
    try {
      return lorentz_dot(detail::lorentz_of(S(Complex(0.5 - d, t))), out.normal);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  for (int k = 0; k < nlevels; ++k) {
    const double t = nlevels == 1 ? t_lo : t_lo + (t_hi - t_lo) * k / (nlevels - 1.0);
    // g(0) = 0 on every level; scan g/d on a geometric grid to skip that root
    double dprev = opt.d_min;
    auto gp = g(t, dprev);
    std::optional<std::pair<double, double>> bracket;
    for (int j = 1; j <= opt.scan && !bracket; ++j) {
      const double dj = opt.d_min * std::pow(opt.d_max / opt.d_min, static_cast<double>(j) / opt.scan);
      const auto gj = g(t, dj);
      if (gp && gj && (*gp < 0) != (*gj < 0)) bracket = std::pair{dprev, dj};
      dprev = dj;
      gp = gj;
    }
    if (!bracket) {
      out.skipped.push_back(t);
      continue;
    }
    auto [lo, hi] = *bracket;
    double glo = *g(t, lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto gm = g(t, mid);
      if (!gm) break;
      if ((*gm < 0) == (glo < 0)) {
        lo = mid;
        glo = *gm;
      } else {
        hi = mid;
      }
    }
    SelfIntersectionLevel L;
    L.t = t;
    L.d = 0.5 * (lo + hi);
    L.x1 = Complex(0.5 - L.d, t);
    L.x2 = Complex(0.5 + L.d, t);
    try {
      L.distance = hyperbolic_distance(S(L.x1), S(L.x2));
    } catch (const std::exception&) {
      out.skipped.push_back(t);
      continue;
    }
    if (L.distance >= opt.coincidence) {
      out.skipped.push_back(t);
      continue;
    }
    out.levels.push_back(L);
  }
  for (const auto& L : out.levels) {
    out.curve.x.push_back(L.x2);
    out.curve.s.push_back(out.curve.s.empty() ? 0.0 : out.curve.s.back() + std::abs(L.x2 - out.curve.x[out.curve.x.size() - 2]));
  }
  // angle with the real axis from a quadratic fit d(t) over the lowest levels
  std::vector<std::pair<double, double>> low;
  for (const auto& L : out.levels)
    if (L.t <= t_lo + 0.2 * (t_hi - t_lo)) low.push_back({L.t, L.d});
  if (low.size() >= 3) {
    // least squares for d = a + b t + c t^2 (normal equations, 3x3)
    double M[3][4] = {};
    for (auto [t, d] : low) {
      const double p[3] = {1, t, t * t};
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) M[r][c] += p[r] * p[c];
        M[r][3] += p[r] * d;
      }
    }
    for (int c = 0; c < 3; ++c)
      for (int r = c + 1; r < 3; ++r) {
        const double f = M[r][c] / M[c][c];
        for (int k = c; k < 4; ++k) M[r][k] -= f * M[c][k];
      }
    double coef[3];
    for (int r = 2; r >= 0; --r) {
      double s = M[r][3];
      for (int k = r + 1; k < 3; ++k) s -= M[r][k] * coef[k];
      coef[r] = s / M[r][r];
    }
    const double slope = coef[1] + 2 * coef[2] * t_lo;  // dd/dt at the lowest level
    out.crossing_angle_deg = std::atan2(1.0, std::abs(slope)) * 180.0 / pi;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Local models

struct Vec2 {
  double x, y;
};
struct Vec3 {
  double x, y, z;
};

inline Vec2 local_model_cusp(double s, double t) { return {s - t * t, s * t}; }
inline Vec3 local_model_swallowtail(double s, double t) { return {s - t * t, s * t, s * s - 4 * s * t * t}; }
inline Vec3 swallowtail_normal_form(double u, double v) {
  return {3 * std::pow(u, 4) + u * u * v, 4 * u * u * u + 2 * u * v, v};
}
inline Vec2 swallowtail_psi(double u, double v) { return {2 * v + 4 * u * u, 2 * u}; }
/// Target change of coordinates with the x^2 coefficient that makes f_s = Psi o F~ o psi hold.
inline Vec3 swallowtail_Psi(const Vec3& p) { return {(-p.z + p.x * p.x) / 16.0, p.y / 2.0, p.x / 2.0}; }
/// The variant with coefficient 4x^2, kept to document the difference 3v^2/4.
inline Vec3 swallowtail_Psi_4x2(const Vec3& p) { return {(-p.z + 4 * p.x * p.x) / 16.0, p.y / 2.0, p.x / 2.0}; }

inline double cusp_discriminant_residual(double s, double t) {
  const Vec2 p = local_model_cusp(s, t);
  const double lhs = 27 * p.y * p.y + 4 * p.x * p.x * p.x;
  const double rhs = std::pow(s + 2 * t * t, 2) * (4 * s - t * t);
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

inline double swallowtail_factorization_residual(double u, double v) {
  const Vec2 st = swallowtail_psi(u, v);
  const Vec3 a = swallowtail_Psi(local_model_swallowtail(st.x, st.y));
  const Vec3 b = swallowtail_normal_form(u, v);
  const double scale = std::max({1.0, std::abs(b.x), std::abs(b.y), std::abs(b.z)});
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)}) / scale;
}

}  // namespace hsm
