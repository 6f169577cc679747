#pragma once

// Mobius and anti-Mobius maps of the Riemann sphere. An anti-Mobius map acts
// by z -> m(conj z).

#include <cmath>
#include <stdexcept>

#include "hsm/mat2.hpp"

namespace hsm {

struct MobiusMap {
  Mat2 m;
  bool anti = false;

  static MobiusMap identity() { return {}; }
  static MobiusMap holomorphic(const Mat2& m) { return MobiusMap{m, false}.normalized(); }
  static MobiusMap antiholomorphic(const Mat2& m) { return MobiusMap{m, true}.normalized(); }

  /// z -> e^{i phi} conj(z), mirror is the line through 0 at angle phi/2.
  static MobiusMap line_reflection(double phi) {
    return antiholomorphic(Mat2::diagonal(std::polar(1.0, phi), 1.0));
  }
  /// Reflection in the circle |z - c| = r.
  static MobiusMap circle_reflection(Complex c, double r) {
    return antiholomorphic({c, r * r - std::norm(c), 1.0, -std::conj(c)});
  }

  MobiusMap normalized() const {
    const Complex d = m.det();
    if (std::abs(d) == 0.0) throw std::domain_error("MobiusMap: singular matrix");
    const Complex s = 1.0 / std::sqrt(d);
    return {s * m, anti};
  }

  Complex operator()(Complex z) const {
    const Complex w = anti ? std::conj(z) : z;
    return (m.a * w + m.b) / (m.c * w + m.d);
  }

  /// Holomorphic derivative at z; for anti maps it is d/d(conj z).
  Complex derivative(Complex z) const {
    const Complex w = anti ? std::conj(z) : z;
    const Complex den = m.c * w + m.d;
    return m.det() / (den * den);
  }
  Complex second_derivative(Complex z) const {
    const Complex w = anti ? std::conj(z) : z;
    const Complex den = m.c * w + m.d;
    return -2.0 * m.c * m.det() / (den * den * den);
  }

  /// (g * h)(z) = g(h(z)).
  friend MobiusMap operator*(const MobiusMap& g, const MobiusMap& h) {
    return MobiusMap{g.m * (g.anti ? h.m.conj() : h.m), g.anti != h.anti}.normalized();
  }

  MobiusMap inverse() const {
    const Mat2 inv = m.inverse();
    return MobiusMap{anti ? inv.conj() : inv, anti}.normalized();
  }
};

/// Chordal distance on the Riemann sphere, finite for points at infinity.
inline double chordal_distance(Complex a, Complex b) {
  const bool ia = !std::isfinite(std::abs(a)), ib = !std::isfinite(std::abs(b));
  if (ia && ib) return 0.0;
  if (ia) return 2.0 / std::sqrt(1.0 + std::norm(b));
  if (ib) return 2.0 / std::sqrt(1.0 + std::norm(a));
  return 2.0 * std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

}  // namespace hsm
