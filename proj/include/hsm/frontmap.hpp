#pragma once

// The hyperbolic Schwarz map H = U conj(U)^T: closed form from the inverse
// map, an independent ODE oracle for dU/dx = U Omega, and isometry matching.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "hsm/h3geom.hpp"
#include "hsm/hgde.hpp"
#include "hsm/inverse_map.hpp"
#include "hsm/tiling.hpp"

namespace hsm {

struct FrontValue {
  HermitianForm H = HermitianForm::identity();
  Mat2 U;
  Complex z, x;
  Complex sqrt_dx;
};

/// Square root of dx nearest to prev (principal root without history).
inline Complex continued_sqrt(Complex dx, std::optional<Complex> prev) {
  const Complex r = std::sqrt(dx);
  if (prev && std::abs(r + *prev) < std::abs(r - *prev)) return -r;
  return r;
}

/// i/sqrt(dx) [[z dx, 1 + (z/2) ddx/dx], [dx, (1/2) ddx/dx]].
inline Mat2 representation_matrix(const MapJet& j, Complex z, Complex sqrt_dx) {
  const Complex r = j.ddx / j.dx;
  const Complex s = I / sqrt_dx;
  return {s * z * j.dx, s * (1.0 + 0.5 * z * r), s * j.dx, s * 0.5 * r};
}

/// Raw entries of U conj(U)^T without positivity validation.
struct RawHermitian {
  double h, k;
  Complex w;  // lower-left
};

inline RawHermitian gram(const Mat2& U) {
  return {std::norm(U.a) + std::norm(U.b), std::norm(U.c) + std::norm(U.d),
          U.c * std::conj(U.a) + U.d * std::conj(U.b)};
}

/// Entry-wise formula for H in terms of z, dx, ddx (no square root involved).
inline RawHermitian front_hermitian_direct(const MapJet& j, Complex z) {
  const double adx = std::abs(j.dx);
  const Complex r = j.ddx / j.dx;
  const Complex m = 1.0 + 0.5 * z * r;
  const double h = (std::norm(z) * adx * adx + std::norm(m)) / adx;
  const double k = (adx * adx + 0.25 * std::norm(r)) / adx;
  const Complex w = (std::conj(z) * adx * adx + 0.5 * (1.0 + 0.5 * std::conj(z) * std::conj(r)) * r) / adx;
  return {h, k, w};
}

inline void check_jet(const MapJet& j, Complex z) {
  if (!std::isfinite(std::abs(j.dx)) || !std::isfinite(std::abs(j.ddx)) || std::abs(j.dx) == 0.0)
    throw std::domain_error("front: dx/dz vanishes or is not finite at z = " + std::to_string(z.real()) + "+" +
                            std::to_string(z.imag()) + "i");
}

inline FrontValue eval_front_closed_form(const InverseSchwarzMap& inv, Complex z,
                                         std::optional<Complex> prev_sqrt = std::nullopt) {
  const MapJet j = inv(z);
  check_jet(j, z);
  FrontValue f;
  f.z = z;
  f.x = j.x;
  f.sqrt_dx = continued_sqrt(j.dx, prev_sqrt);
  f.U = representation_matrix(j, z, f.sqrt_dx);
  const RawHermitian g = gram(f.U);
  f.H = HermitianForm(g.h, g.k, g.w);
  return f;
}

/// Ball point of a unit-determinant raw form; stays valid up to the sphere.
inline Ball ball_from_unit_hermitian(const RawHermitian& g) { return ball_from_hermitian(g.h, g.k, g.w, 1.0); }

/// Boundary-to-interior formula written in the entries of U:
/// (u0 conj(u1) + u0' conj(u1'), 1) / (|u1|^2 + |u1'|^2).
inline UpperHalfSpace upper_half_space_from_solutions(const Mat2& U) {
  const double k = std::norm(U.c) + std::norm(U.d);
  return {(U.a * std::conj(U.c) + U.b * std::conj(U.d)) / k, 1.0 / k};
}

// ---------------------------------------------------------------------------
// ODE oracle

struct OdeTolerance {
  double abs = 1e-12;
  double rel = 1e-10;
};

struct FundamentalSolution {
  Mat2 U;
  Complex basepoint, endpoint;
  std::string path_tag;
  std::size_t steps = 0;
};

inline constexpr double ode_singular_margin = 1e-3;

inline double segment_distance(Complex a, Complex b, Complex p) {
  const Complex d = b - a;
  const double n = std::norm(d);
  double t = n == 0.0 ? 0.0 : ((p - a) * std::conj(d)).real() / n;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(a + t * d - p);
}

namespace detail {

using OdeState = std::array<double, 8>;

inline OdeState pack(const Mat2& U) {
  return {U.a.real(), U.a.imag(), U.b.real(), U.b.imag(), U.c.real(), U.c.imag(), U.d.real(), U.d.imag()};
}
inline Mat2 unpack(const OdeState& s) { return {{s[0], s[1]}, {s[2], s[3]}, {s[4], s[5]}, {s[6], s[7]}}; }

/// dU/dtau = (b - a) U Omega(x), Omega = [[0, q], [1, 0]], x = a + tau (b - a).
struct SegmentSystem {
  const ExponentData* e;
  Complex a, b;
  void operator()(const OdeState& s, OdeState& ds, double tau) const {
    const Complex x = a + tau * (b - a);
    const Complex q = eval_q(*e, x).q;
    const Mat2 U = unpack(s);
    const Complex L = b - a;
    const Mat2 dU{L * U.b, L * q * U.a, L * U.d, L * q * U.c};
    ds = pack(dU);
  }
};

}  // namespace detail

/// Integrates along the polyline path[0] -> path[1] -> ... starting from U0.
inline FundamentalSolution integrate_sl_form(const ExponentData& e, const std::vector<Complex>& path, const Mat2& U0,
                                             OdeTolerance tol = {}, const std::string& tag = "") {
  namespace ode = boost::numeric::odeint;
  if (path.size() < 1) throw std::invalid_argument("integrate_sl_form: empty path");
  if (std::abs(U0.det() - 1.0) > 1e-9) throw std::domain_error("integrate_sl_form: det U0 != 1");
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    for (Complex sing : {Complex{0.0}, Complex{1.0}})
      if (segment_distance(path[i], path[i + 1], sing) < ode_singular_margin)
        throw std::domain_error("integrate_sl_form: path passes within 1e-3 of a singular point");

  FundamentalSolution out;
  out.basepoint = path.front();
  out.endpoint = path.back();
  out.path_tag = tag;
  detail::OdeState s = detail::pack(U0);
  using Stepper = ode::runge_kutta_fehlberg78<detail::OdeState>;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (path[i] == path[i + 1]) continue;
    detail::SegmentSystem sys{&e, path[i], path[i + 1]};
    try {
      out.steps += ode::integrate_adaptive(ode::make_controlled<Stepper>(tol.abs, tol.rel), sys, s, 0.0, 1.0, 1e-2);
    } catch (const ode::step_adjustment_error& err) {
      throw std::runtime_error(std::string("integrate_sl_form: step size underflow: ") + err.what());
    }
  }
  out.U = detail::unpack(s);
  return out;
}

inline constexpr double oracle_detour_margin = 0.05;

/// Path from the basepoint to x staying in the closed half-plane of x; the
/// straight segment is replaced by a three-leg detour when it comes near 0 or 1.
inline std::vector<Complex> oracle_path(Complex x, Complex base = 0.5) {
  bool near = false;
  for (Complex sing : {Complex{0.0}, Complex{1.0}})
    near = near || segment_distance(base, x, sing) < oracle_detour_margin;
  if (!near) return {base, x};
  const double s = x.imag() < 0.0 ? -1.0 : 1.0;
  return {base, base + Complex(0.0, 0.5 * s), Complex(x.real(), 0.5 * s), x};
}

/// ODE-backed front x -> H(x) with a fixed initial matrix at the basepoint.
class SlFront {
 public:
  SlFront(ExponentData e, Mat2 U0, Complex base = 0.5, OdeTolerance tol = {})
      : e_(e), U0_(U0), base_(base), tol_(tol) {}

  FundamentalSolution solve(Complex x) const { return integrate_sl_form(e_, oracle_path(x, base_), U0_, tol_); }

  HermitianForm operator()(Complex x) const {
    const RawHermitian g = gram(solve(x).U);
    return HermitianForm(g.h, g.k, g.w);
  }

  const ExponentData& exponents() const { return e_; }
  const Mat2& initial() const { return U0_; }

 private:
  ExponentData e_;
  Mat2 U0_;
  Complex base_;
  OdeTolerance tol_;
};

// ---------------------------------------------------------------------------
// Isometry matching

struct IsometryMatch {
  Isometry P = Isometry::identity();
  double residual = 0.0;
  std::size_t anchor = 0;
};

namespace detail {

/// Lower-triangular L with L L^* = H.
inline Mat2 cholesky(const HermitianForm& H) {
  const double a = std::sqrt(H.h());
  const Complex l21 = H.w() / a;
  const double l22 = std::sqrt(std::max(0.0, H.k() - std::norm(l21)));
  return {a, 0.0, l21, l22};
}

inline std::array<double, 3> spatial(const HermitianForm& H) {
  const HermitianForm n = H.normalized();
  return {n.w().real(), n.w().imag(), 0.5 * (n.h() - n.k())};
}

inline std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline std::array<double, 3> unit(std::array<double, 3> a) {
  const double n = std::sqrt(dot3(a, a));
  for (auto& v : a) v /= n;
  return a;
}

/// Orthonormal frame (columns) from two non-parallel vectors.
inline std::array<std::array<double, 3>, 3> frame(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const auto e1 = unit(a);
  std::array<double, 3> t = b;
  const double p = dot3(t, e1);
  for (int i = 0; i < 3; ++i) t[i] -= p * e1[i];
  if (std::sqrt(dot3(t, t)) < 1e-14) {
    // b parallel to a: any completion works.
    t = std::abs(e1[0]) < 0.9 ? std::array<double, 3>{1, 0, 0} : std::array<double, 3>{0, 1, 0};
    const double p2 = dot3(t, e1);
    for (int i = 0; i < 3; ++i) t[i] -= p2 * e1[i];
  }
  const auto e2 = unit(t);
  return {e1, e2, cross(e1, e2)};
}

/// SU(2) element W with W (v.sigma) W^* = (R v).sigma, via the unit quaternion of R.
inline Mat2 su2_from_rotation(const std::array<std::array<double, 3>, 3>& R) {
  // R[i][j] is row i, column j.
  const double tr = R[0][0] + R[1][1] + R[2][2];
  double qw, qx, qy, qz;
  if (tr > 0) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    qw = 0.25 * s;
    qx = (R[2][1] - R[1][2]) / s;
    qy = (R[0][2] - R[2][0]) / s;
    qz = (R[1][0] - R[0][1]) / s;
  } else if (R[0][0] > R[1][1] && R[0][0] > R[2][2]) {
    const double s = 2.0 * std::sqrt(1.0 + R[0][0] - R[1][1] - R[2][2]);
    qw = (R[2][1] - R[1][2]) / s;
    qx = 0.25 * s;
    qy = (R[0][1] + R[1][0]) / s;
    qz = (R[0][2] + R[2][0]) / s;
  } else if (R[1][1] > R[2][2]) {
    const double s = 2.0 * std::sqrt(1.0 + R[1][1] - R[0][0] - R[2][2]);
    qw = (R[0][2] - R[2][0]) / s;
    qx = (R[0][1] + R[1][0]) / s;
    qy = 0.25 * s;
    qz = (R[1][2] + R[2][1]) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + R[2][2] - R[0][0] - R[1][1]);
    qw = (R[1][0] - R[0][1]) / s;
    qx = (R[0][2] + R[2][0]) / s;
    qy = (R[1][2] + R[2][1]) / s;
    qz = 0.25 * s;
  }
  // W = qw - i (qx s1 + qy s2 + qz s3)
  return {Complex(qw, -qz), Complex(-qy, -qx), Complex(qy, -qx), Complex(qw, qz)};
}

/// Scaled to unit determinant.
inline Mat2 unimodular(const Mat2& U) {
  const Complex r = 1.0 / std::sqrt(U.det());
  return {r * U.a, r * U.b, r * U.c, r * U.d};
}

/// W in SU(2) rotating the reduced points vb onto va, from the point of
/// largest spread and the one most transverse to it.
inline Mat2 fit_rotation(const std::vector<std::array<double, 3>>& va, const std::vector<std::array<double, 3>>& vb) {
  const std::size_t n = vb.size();
  std::size_t j1 = 0;
  double m1 = -1;
  for (std::size_t j = 0; j < n; ++j)
    if (double d = dot3(vb[j], vb[j]); d > m1) {
      m1 = d;
      j1 = j;
    }
  std::size_t j2 = j1;
  double m2 = -1;
  for (std::size_t j = 0; j < n; ++j) {
    const auto c = cross(vb[j1], vb[j]);
    if (double d = dot3(c, c); d > m2) {
      m2 = d;
      j2 = j;
    }
  }
  if (m1 <= 1e-28) return Mat2::identity();
  const auto Fa = frame(va[j1], va[j2]);
  const auto Fb = frame(vb[j1], vb[j2]);
  // R = Fa Fb^T, frames stored as columns (Fa[c] is column c).
  std::array<std::array<double, 3>, 3> R{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < 3; ++k) R[r][c] += Fa[k][r] * Fb[k][c];
  return su2_from_rotation(R);
}

}  // namespace detail

/// P with Ha_j ~ P Hb_j P^* for all j. The anchor fixes P up to a rotation,
/// which is read off from two further points of maximal spread.
inline IsometryMatch match_isometry(const std::vector<HermitianForm>& Ha, const std::vector<HermitianForm>& Hb) {
  if (Ha.size() != Hb.size() || Ha.empty()) throw std::invalid_argument("match_isometry: grid size mismatch");
  const std::size_t n = Ha.size();
  // Best-conditioned pair as anchor.
  std::size_t anchor = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double c = Ha[j].normalized().trace() + Hb[j].normalized().trace();
    if (c < best) {
      best = c;
      anchor = j;
    }
  }
  const Mat2 La = detail::cholesky(Ha[anchor].normalized()), Lb = detail::cholesky(Hb[anchor].normalized());
  const Mat2 La_inv = La.inverse(), Lb_inv = Lb.inverse();
  auto reduce = [](const Mat2& Linv, const HermitianForm& H) {
    return HermitianForm::from_matrix(Linv * H.normalized().matrix() * Linv.adjoint());
  };
  std::vector<std::array<double, 3>> va(n), vb(n);
  for (std::size_t j = 0; j < n; ++j) {
    va[j] = detail::spatial(reduce(La_inv, Ha[j]));
    vb[j] = detail::spatial(reduce(Lb_inv, Hb[j]));
  }
  IsometryMatch m;
  m.P = Isometry(La * detail::fit_rotation(va, vb) * Lb_inv);
  m.anchor = anchor;
  for (std::size_t j = 0; j < n; ++j)
    m.residual = std::max(m.residual, hyperbolic_distance(Ha[j], apply_isometry(m.P, Hb[j])));
  return m;
}

/// Distance between the points A o and B o, where o = I is the origin.
/// Goes through A^{-1} B, so far-out points cost eps*trace rather than eps*trace^2.
inline double frame_distance(const Mat2& A, const Mat2& B) {
  const Mat2 D = detail::unimodular(detail::unimodular(A).inverse() * B);
  return hyperbolic_distance(HermitianForm::from_matrix(D * D.adjoint()), HermitianForm::identity());
}

/// Same as above with points given by frames U (H = U U^*). Prefer this when
/// the frames are at hand: the fit never forms the far-out H.
inline IsometryMatch match_isometry(const std::vector<Mat2>& Ua, const std::vector<Mat2>& Ub) {
  if (Ua.size() != Ub.size() || Ua.empty()) throw std::invalid_argument("match_isometry: grid size mismatch");
  const std::size_t n = Ua.size();
  auto trace = [](const Mat2& U) {
    const Mat2 V = detail::unimodular(U);
    return std::norm(V.a) + std::norm(V.b) + std::norm(V.c) + std::norm(V.d);
  };
  std::size_t anchor = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j)
    if (double c = trace(Ua[j]) + trace(Ub[j]); c < best) {
      best = c;
      anchor = j;
    }
  const Mat2 La = detail::unimodular(Ua[anchor]), Lb = detail::unimodular(Ub[anchor]);
  const Mat2 La_inv = La.inverse(), Lb_inv = Lb.inverse();
  auto reduce = [](const Mat2& Linv, const Mat2& U) {
    const Mat2 V = detail::unimodular(Linv * U);
    return detail::spatial(HermitianForm::from_matrix(V * V.adjoint()));
  };
  std::vector<std::array<double, 3>> va(n), vb(n);
  for (std::size_t j = 0; j < n; ++j) {
    va[j] = reduce(La_inv, Ua[j]);
    vb[j] = reduce(Lb_inv, Ub[j]);
  }
  IsometryMatch m;
  m.P = Isometry(La * detail::fit_rotation(va, vb) * Lb_inv);
  m.anchor = anchor;
  for (std::size_t j = 0; j < n; ++j)
    m.residual = std::max(m.residual, frame_distance(Ua[j], m.P.matrix() * Ub[j]));
  return m;
}

// ---------------------------------------------------------------------------
// End behavior

struct EndProbe {
  std::vector<Ball> points;
  std::vector<double> norms;
  bool monotone_tail = false;
  double cauchy_gap = 0.0;  // Euclidean gap of the last two ball points
};

/// Follows z along `ray` (ordered toward the end). The ball point is computed
/// from the unit-determinant form, so it stays meaningful at the sphere.
inline EndProbe end_behavior_probe(const InverseSchwarzMap& inv, const std::vector<Complex>& ray,
                                   std::size_t tail = 4) {
  EndProbe p;
  for (Complex z : ray) {
    const MapJet j = inv(z);
    check_jet(j, z);
    const RawHermitian g = front_hermitian_direct(j, z);
    const Ball b = ball_from_unit_hermitian(g);
    p.points.push_back(b);
    p.norms.push_back(b.norm());
  }
  const std::size_t n = p.norms.size();
  p.monotone_tail = n >= 2;
  for (std::size_t i = (n > tail ? n - tail : 1); i < n; ++i) {
    // once both norms have rounded onto the sphere only noise is left
    const bool saturated = p.norms[i] >= 1.0 - 1e-15 && p.norms[i - 1] >= 1.0 - 1e-15;
    if (!(p.norms[i] > p.norms[i - 1]) && !saturated) p.monotone_tail = false;
  }
  if (n >= 2) {
    const Ball& a = p.points[n - 1];
    const Ball& b = p.points[n - 2];
    p.cauchy_gap = std::sqrt((a.x1 - b.x1) * (a.x1 - b.x1) + (a.x2 - b.x2) * (a.x2 - b.x2) + (a.x3 - b.x3) * (a.x3 - b.x3));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Lifting x back to z on one tile

/// Inverts x(z) on the tile g(T): Newton's method seeded from the nearest
/// node of a sampled grid, accepting only roots inside the (closed) tile.
class TileLift {
 public:
  TileLift(InverseSchwarzMap inv, BaseTriangle base, MobiusMap g, int resolution = 48)
      : inv_(std::move(inv)), base_(std::move(base)), g_(g), ginv_(g.inverse()) {
    for (int i = 1; i <= resolution; ++i)
      for (int j = 0; j <= resolution; ++j) {
        const Complex z = g_(base_.fan_point(static_cast<double>(i) / resolution, static_cast<double>(j) / resolution));
        try {
          const MapJet m = inv_(z);
          if (std::isfinite(std::abs(m.x)) && std::abs(m.dx) > 0.0) nodes_.push_back({z, m.x});
        } catch (const std::domain_error&) {
          // corners and poles are not usable seeds
        }
      }
    if (nodes_.empty()) throw std::domain_error("TileLift: no usable sample in tile");
  }

  std::optional<Complex> lift(Complex x) const {
    std::vector<std::pair<double, Complex>> order;
    order.reserve(nodes_.size());
    for (const auto& [z, xs] : nodes_) order.push_back({chordal_distance(xs, x), z});
    const std::size_t tries = std::min<std::size_t>(6, order.size());
    std::partial_sort(order.begin(), order.begin() + tries, order.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < tries; ++k)
      if (auto z = newton(order[k].second, x)) return z;
    return std::nullopt;
  }

  FrontValue front(Complex x) const {
    const auto z = lift(x);
    if (!z) throw std::domain_error("TileLift: no preimage of x in tile");
    return eval_front_closed_form(inv_, *z);
  }

  const MobiusMap& tile() const { return g_; }

 private:
  std::optional<Complex> newton(Complex z, Complex target) const {
    const double scale = 1.0 + std::abs(target);
    try {
      MapJet m = inv_(z);
      double r = std::abs(m.x - target);
      for (int it = 0; it < 80; ++it) {
        if (r <= 1e-14 * scale) break;
        Complex step = (m.x - target) / m.dx;
        bool improved = false;
        for (int h = 0; h < 30; ++h, step *= 0.5) {
          const Complex zn = z - step;
          MapJet mn;
          try {
            mn = inv_(zn);
          } catch (const std::domain_error&) {
            continue;
          }
          const double rn = std::abs(mn.x - target);
          if (std::isfinite(rn) && rn < r) {
            z = zn;
            m = mn;
            r = rn;
            improved = true;
            break;
          }
        }
        if (!improved) break;
      }
      if (r > 1e-11 * scale) return std::nullopt;
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
    if (!base_.contains(ginv_(z), -1e-9)) return std::nullopt;
    return z;
  }

  InverseSchwarzMap inv_;
  BaseTriangle base_;
  MobiusMap g_, ginv_;
  std::vector<std::pair<Complex, Complex>> nodes_;
};

/// The tile among T and R1(T) whose image is the upper half x-plane.
inline MobiusMap upper_half_plane_tile(const InverseSchwarzMap& inv, const BaseTriangle& base) {
  const Complex x = inv(base.fan_point(0.5, 0.5)).x;
  return x.imag() > 0.0 ? MobiusMap::identity() : base.mirrors()[0];
}

// ---------------------------------------------------------------------------
// Basepoints

/// A point of the base triangle edge joining the vertices over x = 0 and
/// x = 1 where x = 1/2 (the edge maps onto the interval (0,1)).
inline Complex triangle_basepoint(const InverseSchwarzMap& inv, const BaseTriangle& base) {
  if (base.kind() == BaseTriangle::Kind::Fuchsian) return I;  // lambda(i) = 1/2
  // Classify the three corners by x.
  const auto& V = base.vertices();
  auto corner_x = [&](Complex v) {
    const Complex probe = v + 1e-7 * (base.fan_point(0.5, 0.5) - v);
    return inv(probe).x;
  };
  int i0 = -1, i1 = -1;
  for (int i = 0; i < 3; ++i) {
    const Complex x = corner_x(V[i]);
    if (std::abs(x) < 1e-3) i0 = i;
    else if (std::abs(x - 1.0) < 1e-3) i1 = i;
  }
  if (i0 < 0 || i1 < 0) throw std::logic_error("triangle_basepoint: corners over 0 and 1 not found");
  // Edges in fan coordinates: (0,1)-(1,?) are rays, 1-2 is the circle arc at u = 1.
  auto edge_point = [&](double s) -> Complex {
    const int a = std::min(i0, i1), b = std::max(i0, i1);
    double u, v;
    if (a == 0 && b == 1) { u = s; v = 0.0; }
    else if (a == 0 && b == 2) { u = s; v = 1.0; }
    else { u = 1.0; v = s; }
    return base.fan_point(u, v);
  };
  // Orient s from the x=0 corner to the x=1 corner, then bisect x - 1/2 (real on the edge).
  auto fx = [&](double s) { return inv(edge_point(s)).x.real() - 0.5; };
  double lo = 1e-6, hi = 1.0 - 1e-6;
  double flo = fx(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fx(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return edge_point(0.5 * (lo + hi));
}

/// The base-triangle point with x = 1/2 and the closed-form U there. Using it
/// as U0 makes the ODE front coincide with the closed form on the base tile.
inline Mat2 basepoint_matrix(const InverseSchwarzMap& inv, const BaseTriangle& base) {
  return eval_front_closed_form(inv, triangle_basepoint(inv, base)).U;
}

}  // namespace hsm
