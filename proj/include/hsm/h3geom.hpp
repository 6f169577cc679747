#pragma once

// Models of hyperbolic 3-space: positive-definite Hermitian forms modulo
// positive scale, the upper half-space C x R+, the unit hyperboloid L1 in
// Lorentz-Minkowski space, and the Poincare ball.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "hsm/mat2.hpp"

namespace hsm {

/// [[h, conj(w)], [w, k]], positive definite.
class HermitianForm {
 public:
  static constexpr double det_tolerance = 1e-12;

  HermitianForm(double h, double k, Complex w) : h_(h), k_(k), w_(w) {
    if (!valid(h, k, w))
      throw std::domain_error("HermitianForm: not positive definite (h=" + std::to_string(h) +
                              ", k=" + std::to_string(k) + ")");
  }

  static bool valid(double h, double k, Complex w) {
    if (!(h > 0.0) || !(k > 0.0) || !std::isfinite(h) || !std::isfinite(k)) return false;
    const double det = h * k - std::norm(w);
    return det > det_tolerance * h * k;
  }

  static std::optional<HermitianForm> checked(double h, double k, Complex w) {
    if (!valid(h, k, w)) return std::nullopt;
    return HermitianForm(h, k, w);
  }

  /// Hermitian part of m: diagonal real parts, lower-left averaged with conj(upper-right).
  static HermitianForm from_matrix(const Mat2& m) {
    return HermitianForm(m.a.real(), m.d.real(), 0.5 * (m.c + std::conj(m.b)));
  }

  static HermitianForm identity() { return HermitianForm(1.0, 1.0, 0.0); }

  double h() const { return h_; }
  double k() const { return k_; }
  Complex w() const { return w_; }
  double det() const { return h_ * k_ - std::norm(w_); }
  double trace() const { return h_ + k_; }

  Mat2 matrix() const { return {h_, std::conj(w_), w_, k_}; }
  HermitianForm scaled(double c) const { return HermitianForm(c * h_, c * k_, c * w_); }
  /// Representative with unit determinant.
  HermitianForm normalized() const { return scaled(1.0 / std::sqrt(det())); }
  /// The orientation-reversing isometry H -> H^T.
  HermitianForm transposed() const { return HermitianForm(h_, k_, std::conj(w_)); }

 private:
  double h_, k_;
  Complex w_;
};

struct UpperHalfSpace {
  Complex z;
  double t;
};

struct Lorentz {
  double x0, x1, x2, x3;

  /// Pairing of signature (+,-,-,-).
  friend double lorentz_dot(const Lorentz& p, const Lorentz& q) {
    return p.x0 * q.x0 - p.x1 * q.x1 - p.x2 * q.x2 - p.x3 * q.x3;
  }
};

struct Ball {
  double x1, x2, x3;
  double norm() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }
};

/// A point of H^3 stored in exactly one chart.
class H3Point {
 public:
  using Chart = std::variant<UpperHalfSpace, Lorentz, Ball>;
  static constexpr double lorentz_tolerance = 1e-12;

  static H3Point upper_half_space(Complex z, double t) {
    if (!(t > 0.0) || !std::isfinite(t) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::domain_error("H3Point: upper half-space requires t > 0");
    return H3Point(UpperHalfSpace{z, t});
  }

  /// Normalizes a future-timelike vector onto L1.
  static H3Point lorentz(double x0, double x1, double x2, double x3) {
    const double form = x0 * x0 - x1 * x1 - x2 * x2 - x3 * x3;
    if (!(x0 > 0.0) || !(form > 0.0))
      throw std::domain_error("H3Point: Lorentz vector is not future timelike");
    const double s = 1.0 / std::sqrt(form);
    Lorentz p{s * x0, s * x1, s * x2, s * x3};
    if (std::abs(lorentz_dot(p, p) - 1.0) > lorentz_tolerance * p.x0 * p.x0)
      throw std::domain_error("H3Point: Lorentz normalization lost precision");
    return H3Point(p);
  }

  static H3Point ball(double x1, double x2, double x3) {
    if (!(x1 * x1 + x2 * x2 + x3 * x3 < 1.0))
      throw std::domain_error("H3Point: ball point outside the unit ball");
    return H3Point(Ball{x1, x2, x3});
  }

  const Chart& chart() const { return chart_; }
  bool is_upper_half_space() const { return std::holds_alternative<UpperHalfSpace>(chart_); }
  bool is_lorentz() const { return std::holds_alternative<Lorentz>(chart_); }
  bool is_ball() const { return std::holds_alternative<Ball>(chart_); }

  Lorentz as_lorentz() const;
  Ball as_ball() const;
  UpperHalfSpace as_upper_half_space() const;
  /// Unit-determinant Hermitian representative.
  HermitianForm as_hermitian() const;

 private:
  explicit H3Point(Chart c) : chart_(c) {}
  Chart chart_;
};

// ---------------------------------------------------------------------------
// Chart conversions

inline H3Point hermitian_to_upper_half_space(const HermitianForm& H) {
  return H3Point::upper_half_space(H.w() / H.k(), std::sqrt(H.det()) / H.k());
}

inline H3Point hermitian_to_lorentz(const HermitianForm& H) {
  const double s = 0.5 / std::sqrt(H.det());
  const Complex w = H.w();
  return H3Point::lorentz(s * (H.h() + H.k()), s * 2.0 * w.real(), s * 2.0 * w.imag(),
                          s * (H.h() - H.k()));
}

inline HermitianForm upper_half_space_to_hermitian(const UpperHalfSpace& p) {
  return HermitianForm(p.t * p.t + std::norm(p.z), 1.0, p.z);
}

inline HermitianForm lorentz_to_hermitian(const Lorentz& p) {
  return HermitianForm(p.x0 + p.x3, p.x0 - p.x3, Complex(p.x1, p.x2));
}

inline H3Point lorentz_to_ball(const Lorentz& p) {
  const double s = 1.0 / (1.0 + p.x0);
  return H3Point::ball(s * p.x1, s * p.x2, s * p.x3);
}

inline H3Point lorentz_to_ball(const H3Point& p) {
  if (!p.is_lorentz()) throw std::invalid_argument("lorentz_to_ball: point is not in the Lorentz chart");
  return lorentz_to_ball(std::get<Lorentz>(p.chart()));
}

inline H3Point ball_to_lorentz(const Ball& b) {
  const double r2 = b.x1 * b.x1 + b.x2 * b.x2 + b.x3 * b.x3;
  const double s = 1.0 / (1.0 - r2);
  return H3Point::lorentz(s * (1.0 + r2), s * 2.0 * b.x1, s * 2.0 * b.x2, s * 2.0 * b.x3);
}

/// Closed-form composite C x R+ -> B3, independent of the Lorentz route.
inline H3Point upper_half_space_to_ball(const UpperHalfSpace& p) {
  const double denom = std::norm(p.z) + (1.0 + p.t) * (1.0 + p.t);
  return H3Point::ball(2.0 * p.z.real() / denom, 2.0 * p.z.imag() / denom,
                       (p.t * p.t + std::norm(p.z) - 1.0) / denom);
}

inline Lorentz H3Point::as_lorentz() const {
  struct Visitor {
    Lorentz operator()(const Lorentz& p) const { return p; }
    Lorentz operator()(const Ball& b) const { return std::get<Lorentz>(ball_to_lorentz(b).chart()); }
    Lorentz operator()(const UpperHalfSpace& u) const {
      return std::get<Lorentz>(hermitian_to_lorentz(upper_half_space_to_hermitian(u)).chart());
    }
  };
  return std::visit(Visitor{}, chart_);
}

inline Ball H3Point::as_ball() const {
  if (const auto* b = std::get_if<Ball>(&chart_)) return *b;
  return std::get<Ball>(lorentz_to_ball(as_lorentz()).chart());
}

inline UpperHalfSpace H3Point::as_upper_half_space() const {
  if (const auto* u = std::get_if<UpperHalfSpace>(&chart_)) return *u;
  return std::get<UpperHalfSpace>(hermitian_to_upper_half_space(as_hermitian()).chart());
}

inline HermitianForm H3Point::as_hermitian() const {
  if (const auto* u = std::get_if<UpperHalfSpace>(&chart_))
    return upper_half_space_to_hermitian(*u).normalized();
  return lorentz_to_hermitian(as_lorentz()).normalized();
}

/// Ball-chart image of a raw Hermitian matrix whose determinant is known.
/// Stable near the sphere at infinity where hk - |w|^2 cancels.
inline Ball ball_from_hermitian(double h, double k, Complex w, double det) {
  const double denom = h + k + 2.0 * std::sqrt(det);
  return {2.0 * w.real() / denom, 2.0 * w.imag() / denom, (h - k) / denom};
}

// ---------------------------------------------------------------------------
// Isometries

/// Orientation-preserving isometry H -> P H P^*.
class Isometry {
 public:
  explicit Isometry(const Mat2& P) : P_(P) {
    if (std::abs(P.det()) <= 1e-300 * std::max(1.0, P.max_abs() * P.max_abs()))
      throw std::domain_error("Isometry: singular matrix");
  }
  static Isometry identity() { return Isometry(Mat2::identity()); }

  const Mat2& matrix() const { return P_; }
  friend Isometry operator*(const Isometry& p, const Isometry& q) { return Isometry(p.P_ * q.P_); }

 private:
  Mat2 P_;
};

inline HermitianForm apply_isometry(const Isometry& P, const HermitianForm& H) {
  return HermitianForm::from_matrix(P.matrix() * H.matrix() * P.matrix().adjoint());
}

inline H3Point apply_isometry(const Isometry& P, const H3Point& p) {
  return hermitian_to_lorentz(apply_isometry(P, p.as_hermitian()));
}

// ---------------------------------------------------------------------------
// Distance

/// arccosh of the Lorentz pairing, evaluated as 2 asinh(|p-q|/2) so that
/// nearby points keep full relative precision.
inline double hyperbolic_distance(const H3Point& p, const H3Point& q) {
  constexpr double clamp_tol = 1e-10;
  const Lorentz a = p.as_lorentz();
  const Lorentz b = q.as_lorentz();
  const double pairing = lorentz_dot(a, b);
  // rounding in the pairing grows with the size of the coordinates
  if (pairing < 1.0 - clamp_tol * std::max(1.0, a.x0 * b.x0))
    throw std::runtime_error("hyperbolic_distance: Lorentz pairing below 1");
  const Lorentz d{a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
  const double chord2 = std::max(0.0, -lorentz_dot(d, d));
  return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
}

inline double hyperbolic_distance(const HermitianForm& a, const HermitianForm& b) {
  return hyperbolic_distance(hermitian_to_lorentz(a), hermitian_to_lorentz(b));
}

}  // namespace hsm
