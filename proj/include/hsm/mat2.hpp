#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace hsm {

using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr Complex I{0.0, 1.0};

/// 2x2 complex matrix [[a, b], [c, d]].
struct Mat2 {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static constexpr Mat2 identity() { return {}; }
  static constexpr Mat2 diagonal(Complex p, Complex q) { return {p, 0.0, 0.0, q}; }

  Complex det() const { return a * d - b * c; }
  Complex trace() const { return a + d; }
  Mat2 transpose() const { return {a, c, b, d}; }
  Mat2 conj() const { return {std::conj(a), std::conj(b), std::conj(c), std::conj(d)}; }
  Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }
  Mat2 inverse() const {
    const Complex D = det();
    return {d / D, -b / D, -c / D, a / D};
  }
  double max_abs() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  }

  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend Mat2 operator*(Complex s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
  friend Mat2 operator+(const Mat2& m, const Mat2& n) {
    return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d};
  }
  friend Mat2 operator-(const Mat2& m, const Mat2& n) {
    return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
  }
};

}  // namespace hsm
