#pragma once

// Univariate complex polynomials (dense, ascending coefficients) and sparse
// multivariate polynomials with exact rational coefficients.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsm/mat2.hpp"
#include "hsm/rational.hpp"

namespace hsm {

/// Value and first two derivatives.
struct Jet {
  Complex p, dp, ddp;
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> ascending) : c_(std::move(ascending)) { trim(); }
  Polynomial(std::initializer_list<Complex> ascending) : c_(ascending) { trim(); }
  static Polynomial constant(Complex a) { return Polynomial({a}); }
  static Polynomial monomial(int degree, Complex a = 1.0) {
    std::vector<Complex> c(degree + 1, 0.0);
    c[degree] = a;
    return Polynomial(std::move(c));
  }

  /// From descending integer-like coefficients, the way tables print them.
  static Polynomial descending(std::initializer_list<Complex> desc) {
    std::vector<Complex> c(desc);
    std::reverse(c.begin(), c.end());
    return Polynomial(std::move(c));
  }

  int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
  const std::vector<Complex>& coefficients() const { return c_; }
  Complex coeff(int k) const { return k < 0 || k > degree() ? Complex{} : c_[k]; }

  Complex operator()(Complex z) const {
    Complex r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + *it;
    return r;
  }

  /// Horner for p, p', p'' in one pass.
  Jet jet(Complex z) const {
    Complex p = 0.0, dp = 0.0, ddp = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      ddp = ddp * z + 2.0 * dp;
      dp = dp * z + p;
      p = p * z + *it;
    }
    return {p, dp, ddp};
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Complex> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
  }

  Polynomial pow(int e) const {
    Polynomial r = constant(1.0), b = *this;
    for (; e > 0; e >>= 1) {
      if (e & 1) r = r * b;
      b = b * b;
    }
    return r;
  }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.c_.empty() || q.c_.empty()) return {};
    std::vector<Complex> r(p.c_.size() + q.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.c_.size(); ++i)
      for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(Complex s, const Polynomial& p) {
    std::vector<Complex> r(p.c_);
    for (auto& v : r) v *= s;
    return Polynomial(std::move(r));
  }
  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<Complex> r(std::max(p.c_.size(), q.c_.size()), 0.0);
    for (std::size_t i = 0; i < p.c_.size(); ++i) r[i] += p.c_[i];
    for (std::size_t i = 0; i < q.c_.size(); ++i) r[i] += q.c_[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + (-1.0) * q; }

  /// Largest coefficient difference, relative to the larger coefficient scale.
  static double max_coeff_diff(const Polynomial& p, const Polynomial& q) {
    double d = 0.0, scale = 1e-300;
    for (int k = 0; k <= std::max(p.degree(), q.degree()); ++k) {
      d = std::max(d, std::abs(p.coeff(k) - q.coeff(k)));
      scale = std::max({scale, std::abs(p.coeff(k)), std::abs(q.coeff(k))});
    }
    return d / scale;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == Complex{}) c_.pop_back();
  }
  std::vector<Complex> c_;
};

/// All complex roots by Durand-Kerner iteration, each polished by Newton.
inline std::vector<Complex> polynomial_roots(const Polynomial& p, int max_iter = 2000, double tol = 1e-15) {
  const int n = p.degree();
  if (n < 1) return {};
  const Complex lead = p.coeff(n);
  std::vector<Complex> monic(n + 1);
  for (int k = 0; k <= n; ++k) monic[k] = p.coeff(k) / lead;
  const Polynomial m(monic);

  // Cauchy bound for the initial circle.
  double radius = 0.0;
  for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(monic[k]));
  radius = 1.0 + radius;
  std::vector<Complex> z(n);
  // Off-symmetric start so real polynomials do not stall on the real axis.
  for (int k = 0; k < n; ++k) z[k] = radius * std::polar(1.0, 2 * pi * k / n + 0.4) * (0.5 + 0.5 * k / n);

  for (int it = 0; it < max_iter; ++it) {
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      Complex denom = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      if (std::abs(denom) == 0.0) denom = 1e-300;
      const Complex step = m(z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step) / std::max(1.0, std::abs(z[i])));
    }
    if (change < tol) break;
  }
  for (auto& r : z) {
    for (int k = 0; k < 5; ++k) {
      const Jet j = m.jet(r);
      if (std::abs(j.dp) == 0.0) break;
      r -= j.p / j.dp;
    }
  }
  return z;
}

// ---------------------------------------------------------------------------
// Sparse multivariate polynomials over Q (up to three variables).

class MPoly {
 public:
  using Exponent = std::array<int, 3>;
  using Terms = std::map<Exponent, Rational>;

  MPoly() = default;
  MPoly(Rational c) { add({0, 0, 0}, c); }  // NOLINT(implicit)
  static MPoly var(int index) {
    MPoly p;
    Exponent e{0, 0, 0};
    e.at(index) = 1;
    p.add(e, 1);
    return p;
  }
  static MPoly term(Exponent e, Rational c) {
    MPoly p;
    p.add(e, c);
    return p;
  }

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  Rational coeff(Exponent e) const {
    auto it = t_.find(e);
    return it == t_.end() ? Rational{} : it->second;
  }

  void add(Exponent e, Rational c) {
    if (c.is_zero()) return;
    auto [it, inserted] = t_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  int degree_in(int index) const {
    int d = -1;
    for (const auto& [e, c] : t_) d = std::max(d, e[index]);
    return d;
  }

  /// Coefficient polynomial of var^k.
  MPoly coefficient_of(int index, int k) const {
    MPoly r;
    for (const auto& [e, c] : t_)
      if (e[index] == k) {
        Exponent f = e;
        f[index] = 0;
        r.add(f, c);
      }
    return r;
  }

  /// Divides every exponent of var by `factor` (exact); throws if some exponent is not a multiple.
  MPoly compress(int index, int factor) const {
    MPoly r;
    for (const auto& [e, c] : t_) {
      if (e[index] % factor != 0) throw std::domain_error("MPoly::compress: exponent not divisible");
      Exponent f = e;
      f[index] /= factor;
      r.add(f, c);
    }
    return r;
  }

  /// Divides by the monomial var^1; throws if some term lacks it.
  MPoly divide_by_var(int index) const {
    MPoly r;
    for (const auto& [e, c] : t_) {
      if (e[index] == 0) throw std::domain_error("MPoly::divide_by_var: not divisible");
      Exponent f = e;
      --f[index];
      r.add(f, c);
    }
    return r;
  }

  /// Substitutes var(index) := p.
  MPoly substitute(int index, const MPoly& p) const {
    MPoly r;
    std::vector<MPoly> powers{MPoly(1)};
    for (const auto& [e, c] : t_) {
      while (static_cast<int>(powers.size()) <= e[index]) powers.push_back(powers.back() * p);
      Exponent f = e;
      f[index] = 0;
      r = r + term(f, c) * powers[e[index]];
    }
    return r;
  }

  double eval(double a, double b = 0.0, double c = 0.0) const {
    double s = 0.0;
    for (const auto& [e, v] : t_) s += v.to_double() * std::pow(a, e[0]) * std::pow(b, e[1]) * std::pow(c, e[2]);
    return s;
  }

  /// Univariate view in var(index), all other exponents must be zero.
  Polynomial to_univariate(int index) const {
    std::vector<Complex> c(std::max(0, degree_in(index) + 1), 0.0);
    for (const auto& [e, v] : t_) {
      for (int j = 0; j < 3; ++j)
        if (j != index && e[j] != 0) throw std::domain_error("MPoly::to_univariate: not univariate");
      c[e[index]] += v.to_double();
    }
    return Polynomial(std::move(c));
  }

  friend MPoly operator+(const MPoly& p, const MPoly& q) {
    MPoly r = p;
    for (const auto& [e, c] : q.t_) r.add(e, c);
    return r;
  }
  friend MPoly operator-(const MPoly& p) {
    MPoly r;
    for (const auto& [e, c] : p.t_) r.add(e, -c);
    return r;
  }
  friend MPoly operator-(const MPoly& p, const MPoly& q) { return p + (-q); }
  friend MPoly operator*(const MPoly& p, const MPoly& q) {
    MPoly r;
    for (const auto& [e1, c1] : p.t_)
      for (const auto& [e2, c2] : q.t_) r.add({e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]}, c1 * c2);
    return r;
  }
  friend bool operator==(const MPoly& p, const MPoly& q) { return p.t_ == q.t_; }

  MPoly pow(int e) const {
    MPoly r(1);
    for (int k = 0; k < e; ++k) r = r * *this;
    return r;
  }

  std::string str(const std::array<const char*, 3>& names = {"a", "b", "c"}) const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      const auto& [e, c] = *it;
      os << (first ? "" : " + ") << "(" << c << ")";
      for (int j = 0; j < 3; ++j)
        if (e[j] > 0) os << "*" << names[j] << (e[j] > 1 ? "^" + std::to_string(e[j]) : "");
      first = false;
    }
    return os.str();
  }

 private:
  Terms t_;
};

/// re + i*im with MPoly parts; used to expand |P|^2 and Im(P*conj(Q)).
struct GaussianMPoly {
  MPoly re, im;

  friend GaussianMPoly operator+(const GaussianMPoly& a, const GaussianMPoly& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianMPoly operator-(const GaussianMPoly& a, const GaussianMPoly& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianMPoly operator*(const GaussianMPoly& a, const GaussianMPoly& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianMPoly conj() const { return {re, -im}; }
  MPoly norm() const { return re * re + im * im; }
  GaussianMPoly pow(int e) const {
    GaussianMPoly r{MPoly(1), MPoly()};
    for (int k = 0; k < e; ++k) r = r * *this;
    return r;
  }
};

}  // namespace hsm
