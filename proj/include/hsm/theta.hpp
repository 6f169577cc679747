#pragma once

// Theta constants in the nome q = exp(pi i z / 2), the lambda function
// (theta0/theta3)^4 and the Eisenstein series E2. Throughout, a prime means
// q d/dq, and d/dz = (pi i / 2) q d/dq.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hsm/mat2.hpp"
#include "hsm/mobius.hpp"
#include "hsm/polyhedral.hpp"

namespace hsm {

/// The single conversion constant between q d/dq and d/dz.
inline constexpr Complex prime_to_dz{0.0, pi / 2};

inline constexpr double theta_tail_bound = 1e-17;

struct ThetaValues {
  Complex theta2, theta3, theta0;
  Complex dtheta2, dtheta3, dtheta0;  // q d/dq
  int terms = 0;                      // largest n used
};

/// Sums the three theta series, stopping once the first omitted term (and
/// its q d/dq weight) falls below the tail bound.
inline ThetaValues theta_values(Complex z, int max_terms = 10000) {
  if (!(z.imag() > 0.0)) throw std::domain_error("theta_values: requires Im z > 0");
  ThetaValues v;
  Complex s3 = 1.0, s0 = 1.0, s2 = 0.0, d3 = 0.0, d0 = 0.0, d2 = 0.0;
  const Complex piz = I * pi * z;
  int n = 1;
  for (; n <= max_terms; ++n) {
    // theta3/theta0 terms exp(pi i z n^2) = q^(2n^2); theta2 terms exp(pi i z (2n-1)^2/4) = q^((2n-1)^2/2).
    const double e3 = 2.0 * n * n;
    const double e2 = 0.5 * (2.0 * n - 1) * (2.0 * n - 1);
    const Complex t3 = 2.0 * std::exp(piz * static_cast<double>(n) * static_cast<double>(n));
    const Complex t2 = 2.0 * std::exp(piz * (2.0 * n - 1) * (2.0 * n - 1) / 4.0);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    s3 += t3;
    s0 += sign * t3;
    s2 += t2;
    d3 += e3 * t3;
    d0 += sign * e3 * t3;
    d2 += e2 * t2;
    if (std::abs(t2) * (1.0 + e2) < theta_tail_bound && std::abs(t3) * (1.0 + e3) < theta_tail_bound) break;
  }
  if (n > max_terms) throw std::runtime_error("theta_values: series did not converge");
  v.theta2 = s2;
  v.theta3 = s3;
  v.theta0 = s0;
  v.dtheta2 = d2;
  v.dtheta3 = d3;
  v.dtheta0 = d0;
  v.terms = n;
  return v;
}

/// E2 = 1 - 24 sum sigma(n) q^(4n).
inline Complex eisenstein_e2(Complex z) {
  if (!(z.imag() > 0.0)) throw std::domain_error("eisenstein_e2: requires Im z > 0");
  const Complex q4 = std::exp(2.0 * pi * I * z);
  Complex sum = 0.0, p = 1.0;
  for (int n = 1; n < 100000; ++n) {
    p *= q4;
    std::int64_t sigma = 0;
    for (int d = 1; d * d <= n; ++d)
      if (n % d == 0) sigma += (d * d == n) ? d : d + n / d;
    const Complex term = static_cast<double>(sigma) * p;
    sum += term;
    if (std::abs(term) < theta_tail_bound * 1e-3 && std::abs(p) < theta_tail_bound) break;
  }
  return 1.0 - 24.0 * sum;
}

/// lambda and its q d/dq derivatives at a point with Im z > 0, no reduction.
struct LambdaPrime {
  Complex lambda, dlambda, d2_over_d1;  // lambda, lambda', lambda''/lambda'
};

inline LambdaPrime lambda_series(Complex z) {
  const ThetaValues t = theta_values(z);
  const Complex r = t.theta0 / t.theta3;
  const Complex lam = r * r * r * r;
  const Complex t2_4 = std::pow(t.theta2, 4), t0_4 = std::pow(t.theta0, 4), t3_4 = std::pow(t.theta3, 4);
  LambdaPrime L;
  L.lambda = lam;
  L.dlambda = -2.0 * t2_4 * lam;
  L.d2_over_d1 = (4.0 / 6.0) * eisenstein_e2(z) + (4.0 / 6.0) * (t0_4 + t3_4) - 2.0 * t2_4;
  return L;
}

inline constexpr double lambda_reduction_height = 0.5;

/// PSL2(Z) reduction: w = gamma(z) lies in the standard fundamental domain
/// and lambda(z) = phi(lambda(w)), phi an anharmonic Mobius map.
struct LambdaReduction {
  MobiusMap gamma;
  Mat2 phi;
  Complex w;
};

inline LambdaReduction reduce_modular(Complex z) {
  if (!(z.imag() > 0.0)) throw std::domain_error("reduce_modular: requires Im z > 0");
  const Mat2 T{1.0, 1.0, 0.0, 1.0}, Tinv{1.0, -1.0, 0.0, 1.0}, S{0.0, -1.0, 1.0, 0.0};
  // lambda(z+1) = 1/lambda(z), lambda(-1/z) = 1 - lambda(z).
  const Mat2 flip{0.0, 1.0, 1.0, 0.0}, complement{-1.0, 1.0, 0.0, 1.0};
  Mat2 g = Mat2::identity();
  Mat2 phi = Mat2::identity();
  Complex w = z;
  for (int it = 0; it < 10000; ++it) {
    const double shift = std::round(w.real());
    if (shift != 0.0) {
      const int k = static_cast<int>(std::abs(shift));
      for (int j = 0; j < k; ++j) {
        g = (shift > 0 ? Tinv : T) * g;
        phi = phi * flip;
      }
      w -= shift;
    }
    if (std::norm(w) < 1.0 - 1e-15) {
      w = -1.0 / w;
      g = S * g;
      phi = phi * complement;
    } else {
      break;
    }
  }
  return {MobiusMap{g, false}, phi, w};
}

/// x = lambda(z), with derivatives in z.
inline MapJet eval_lambda(Complex z) {
  if (!(z.imag() > 0.0)) throw std::domain_error("eval_lambda: requires Im z > 0");
  if (z.imag() >= lambda_reduction_height) {
    const LambdaPrime L = lambda_series(z);
    MapJet j;
    j.x = L.lambda;
    j.dx = prime_to_dz * L.dlambda;
    j.ddx = prime_to_dz * prime_to_dz * L.d2_over_d1 * L.dlambda;
    return j;
  }
  const LambdaReduction red = reduce_modular(z);
  const LambdaPrime L = lambda_series(red.w);
  const Complex lw = L.lambda;
  const Complex dlw = prime_to_dz * L.dlambda;
  const Complex ddlw = prime_to_dz * prime_to_dz * L.d2_over_d1 * L.dlambda;
  // chain rule through w = gamma(z) and x = phi(lambda(w))
  const Complex gp = red.gamma.derivative(z), gpp = red.gamma.second_derivative(z);
  const Mat2& p = red.phi;
  const Complex den = p.c * lw + p.d;
  const Complex phi1 = p.det() / (den * den), phi2 = -2.0 * p.c * p.det() / (den * den * den);
  const Complex lz = dlw * gp;
  const Complex llz = ddlw * gp * gp + dlw * gpp;
  MapJet j;
  j.x = (p.a * lw + p.b) / den;
  j.dx = phi1 * lz;
  j.ddx = phi2 * lz * lz + phi1 * llz;
  return j;
}

/// Exact integer coefficients of lambda in powers of q^2, by series arithmetic
/// on theta0 and theta3 (integer coefficient series in q^2).
inline std::vector<std::int64_t> lambda_q2_coefficients(int count) {
  const int n = count;
  std::vector<std::int64_t> t0(n, 0), t3(n, 0);
  // theta3 = sum q^(2m^2) = sum (q^2)^(m^2)
  for (int m = -n; m <= n; ++m) {
    const long long e = 1LL * m * m;
    if (e < n) {
      t3[e] += 1;
      t0[e] += (m % 2 == 0) ? 1 : -1;
    }
  }
  auto mul = [n](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    std::vector<std::int64_t> r(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
    return r;
  };
  auto pow4 = [&](const std::vector<std::int64_t>& a) {
    const auto a2 = mul(a, a);
    return mul(a2, a2);
  };
  const auto num = pow4(t0), den = pow4(t3);
  // num / den with den[0] = 1
  std::vector<std::int64_t> r(n, 0);
  for (int k = 0; k < n; ++k) {
    std::int64_t s = num[k];
    for (int j = 1; j <= k; ++j) s -= den[j] * r[k - j];
    r[k] = s;
  }
  return r;
}

}  // namespace hsm
