#pragma once

// Data of the hypergeometric equation E(a,b,c) in its SL-form u'' = q(x) u.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "hsm/mat2.hpp"
#include "hsm/rational.hpp"

namespace hsm {

/// Local order k = 1/|mu| at one singular point.
struct Order {
  enum class Kind { Finite, Infinite, NonStandard };
  Kind kind = Kind::NonStandard;
  int value = 0;  // meaningful for Finite only

  static Order finite(int k) { return {Kind::Finite, k}; }
  static Order infinite() { return {Kind::Infinite, 0}; }
  static Order non_standard() { return {Kind::NonStandard, 0}; }

  bool is_finite() const { return kind == Kind::Finite; }
  bool is_infinite() const { return kind == Kind::Infinite; }
  bool is_standard() const { return kind != Kind::NonStandard; }
  /// 1/k, with 1/inf = 0.
  double reciprocal() const { return is_finite() ? 1.0 / value : 0.0; }

  std::string str() const {
    switch (kind) {
      case Kind::Finite: return std::to_string(value);
      case Kind::Infinite: return "inf";
      default: return "?";
    }
  }
  friend bool operator==(const Order& a, const Order& b) {
    return a.kind == b.kind && (a.kind != Kind::Finite || a.value == b.value);
  }
};

struct ExponentData {
  double a = 0, b = 0, c = 0;
  double mu0 = 0, mu1 = 0, muInf = 0;
  Order k0, k1, kInf;
};

inline constexpr double order_tolerance = 1e-9;
inline constexpr double singular_point_tolerance = 1e-12;

/// Order detection from a real exponent difference.
inline Order order_from_mu(double mu) {
  if (std::abs(mu) <= 1e-14) return Order::infinite();
  const double k = 1.0 / std::abs(mu);
  const double r = std::round(k);
  if (r >= 2.0 && std::abs(k - r) <= order_tolerance) return Order::finite(static_cast<int>(r));
  return Order::non_standard();
}

inline Order order_from_mu(const Rational& mu) {
  if (mu.is_zero()) return Order::infinite();
  // 1/|mu| integral iff |num| = 1
  if (mu.num() == 1 || mu.num() == -1) {
    if (mu.den() >= 2) return Order::finite(static_cast<int>(mu.den()));
  }
  return Order::non_standard();
}

inline ExponentData exponents_from_abc(double a, double b, double c) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw std::domain_error("exponents_from_abc: parameters must be finite reals");
  ExponentData e;
  e.a = a;
  e.b = b;
  e.c = c;
  e.mu0 = 1.0 - c;
  e.mu1 = c - a - b;
  e.muInf = b - a;
  e.k0 = order_from_mu(e.mu0);
  e.k1 = order_from_mu(e.mu1);
  e.kInf = order_from_mu(e.muInf);
  return e;
}

/// Exact mode: orders are read off the reduced fractions.
inline ExponentData exponents_from_abc(const Rational& a, const Rational& b, const Rational& c) {
  const Rational mu0 = Rational(1) - c, mu1 = c - a - b, muInf = b - a;
  ExponentData e = exponents_from_abc(a.to_double(), b.to_double(), c.to_double());
  e.k0 = order_from_mu(mu0);
  e.k1 = order_from_mu(mu1);
  e.kInf = order_from_mu(muInf);
  return e;
}

/// Inverse of the exponent-difference relations.
inline ExponentData exponents_from_mu(double mu0, double mu1, double muInf) {
  return exponents_from_abc(0.5 * (1.0 - mu0 - mu1 - muInf), 0.5 * (1.0 - mu0 - mu1 + muInf), 1.0 - mu0);
}

inline ExponentData exponents_from_mu(const Rational& mu0, const Rational& mu1, const Rational& muInf) {
  const Rational half(1, 2);
  return exponents_from_abc(half * (Rational(1) - mu0 - mu1 - muInf), half * (Rational(1) - mu0 - mu1 + muInf),
                            Rational(1) - mu0);
}

/// Standard equation with orders (k0,k1,kInf); k = 0 encodes infinity.
inline ExponentData exponents_from_orders(int k0, int k1, int kInf) {
  auto mu = [](int k) { return k == 0 ? Rational(0) : Rational(1, k); };
  return exponents_from_mu(mu(k0), mu(k1), mu(kInf));
}

// ---------------------------------------------------------------------------

struct CoefficientValue {
  Complex x;
  Complex q, dq;      // q and dq/dx
  Complex Q, dQ, ddQ;
  Complex R, dR;
};

/// Coefficients of Q = c0 + c1 x + c2 x^2.
inline std::array<double, 3> q_polynomial(const ExponentData& e) {
  return {1.0 - e.mu0 * e.mu0, e.muInf * e.muInf + e.mu0 * e.mu0 - e.mu1 * e.mu1 - 1.0, 1.0 - e.muInf * e.muInf};
}

/// Q, R and their derivatives; valid at every x, including 0 and 1.
inline CoefficientValue eval_QR(const ExponentData& e, Complex x) {
  const auto c = q_polynomial(e);
  CoefficientValue v;
  v.x = x;
  v.Q = c[0] + x * (c[1] + x * c[2]);
  v.dQ = c[1] + 2.0 * c[2] * x;
  v.ddQ = 2.0 * c[2];
  const Complex A = x * (1.0 - x), dA = 1.0 - 2.0 * x;
  v.R = v.dQ * A - 2.0 * v.Q * dA;
  v.dR = v.ddQ * A - v.dQ * dA + 4.0 * v.Q;
  v.q = std::numeric_limits<double>::quiet_NaN();
  v.dq = v.q;
  return v;
}

inline CoefficientValue eval_q(const ExponentData& e, Complex x) {
  if (std::abs(x) <= singular_point_tolerance || std::abs(1.0 - x) <= singular_point_tolerance)
    throw std::domain_error("eval_q: x is a singular point of the equation");
  CoefficientValue v = eval_QR(e, x);
  const Complex A = x * (1.0 - x);
  v.q = -v.Q / (4.0 * A * A);
  v.dq = -v.R / (4.0 * A * A * A);
  return v;
}

// ---------------------------------------------------------------------------

enum class CaseTag { Dihedral, Tetrahedral, Octahedral, Icosahedral, FuchsianInfinite, Euclidean, OtherFuchsian, NonStandard };

struct StandardInfo {
  bool standard = false;
  CaseTag tag = CaseTag::NonStandard;
  int dihedral_n = 0;
};

inline std::string to_string(CaseTag t) {
  switch (t) {
    case CaseTag::Dihedral: return "dihedral";
    case CaseTag::Tetrahedral: return "tetrahedral";
    case CaseTag::Octahedral: return "octahedral";
    case CaseTag::Icosahedral: return "icosahedral";
    case CaseTag::FuchsianInfinite: return "fuchsian-inf-inf-inf";
    case CaseTag::Euclidean: return "euclidean";
    case CaseTag::OtherFuchsian: return "other-fuchsian";
    default: return "non-standard";
  }
}

inline StandardInfo classify_orders(const Order& k0, const Order& k1, const Order& kInf) {
  StandardInfo s;
  if (!k0.is_standard() || !k1.is_standard() || !kInf.is_standard()) return s;
  s.standard = true;
  // Sort with infinity last; finite values ascending.
  std::array<int, 3> k{};
  const std::array<Order, 3> o{k0, k1, kInf};
  for (int i = 0; i < 3; ++i) k[i] = o[i].is_infinite() ? std::numeric_limits<int>::max() : o[i].value;
  std::sort(k.begin(), k.end());
  constexpr int inf = std::numeric_limits<int>::max();
  const double sum = k0.reciprocal() + k1.reciprocal() + kInf.reciprocal();

  if (k[0] == inf) {
    s.tag = CaseTag::FuchsianInfinite;
  } else if (k[0] == 2 && k[1] == 2 && k[2] != inf) {
    s.tag = CaseTag::Dihedral;
    s.dihedral_n = k[2];
  } else if (k[0] == 2 && k[1] == 3 && k[2] == 3) {
    s.tag = CaseTag::Tetrahedral;
  } else if (k[0] == 2 && k[1] == 3 && k[2] == 4) {
    s.tag = CaseTag::Octahedral;
  } else if (k[0] == 2 && k[1] == 3 && k[2] == 5) {
    s.tag = CaseTag::Icosahedral;
  } else if (std::abs(sum - 1.0) < 1e-12) {
    s.tag = CaseTag::Euclidean;
  } else {
    s.tag = CaseTag::OtherFuchsian;
  }
  return s;
}

inline StandardInfo is_standard(const ExponentData& e) { return classify_orders(e.k0, e.k1, e.kInf); }

/// 2/N = 1/k0 + 1/k1 + 1/kInf - 1; nullopt stands for an infinite group.
inline std::optional<int> group_order(const Order& k0, const Order& k1, const Order& kInf) {
  if (!k0.is_standard() || !k1.is_standard() || !kInf.is_standard())
    throw std::domain_error("group_order: non-standard orders");
  const double excess = k0.reciprocal() + k1.reciprocal() + kInf.reciprocal() - 1.0;
  if (excess <= 1e-12) return std::nullopt;
  return static_cast<int>(std::lround(2.0 / excess));
}

inline std::optional<int> group_order(const ExponentData& e) { return group_order(e.k0, e.k1, e.kInf); }

inline std::optional<int> group_order(const StandardInfo& s) {
  switch (s.tag) {
    case CaseTag::Dihedral: return 2 * s.dihedral_n;
    case CaseTag::Tetrahedral: return 12;
    case CaseTag::Octahedral: return 24;
    case CaseTag::Icosahedral: return 60;
    case CaseTag::FuchsianInfinite:
    case CaseTag::Euclidean:
    case CaseTag::OtherFuchsian: return std::nullopt;
    default: throw std::domain_error("group_order: non-standard tag");
  }
}

}  // namespace hsm
