#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hsm {

/// Exact rational p/q with int64 storage. Every operation is overflow-checked
/// (intermediates in __int128) and throws rather than wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
    const __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  friend Rational operator-(const Rational& a) { return from_wide(-static_cast<__int128>(a.num_), a.den_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rational: int64 overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    if (r.num_ == 0) r.den_ = 1;
    return r;
  }

  void assign(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace hsm
