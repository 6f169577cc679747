#include <gtest/gtest.h>

#include <random>

#include "hsm/hgde.hpp"

using namespace hsm;

TEST(Exponents, FromAbc) {
  const ExponentData e = exponents_from_abc(0.5, 0.5, 1.0);
  EXPECT_EQ(e.mu0, 0.0);
  EXPECT_EQ(e.mu1, 0.0);
  EXPECT_EQ(e.muInf, 0.0);
  EXPECT_TRUE(e.k0.is_infinite() && e.k1.is_infinite() && e.kInf.is_infinite());

  const ExponentData z = exponents_from_abc(0, 0, 1);
  EXPECT_EQ(z.mu0, 0.0);
  EXPECT_EQ(z.mu1, 1.0);
  EXPECT_EQ(z.muInf, 0.0);
  EXPECT_FALSE(z.k1.is_standard());
}

TEST(Exponents, DihedralThree) {
  const ExponentData e = exponents_from_mu(0.5, 0.5, 1.0 / 3.0);
  EXPECT_EQ(e.k0, Order::finite(2));
  EXPECT_EQ(e.k1, Order::finite(2));
  EXPECT_EQ(e.kInf, Order::finite(3));
  EXPECT_NEAR(e.mu0, 0.5, 1e-15);
  EXPECT_NEAR(e.muInf, 1.0 / 3.0, 1e-15);
}

TEST(Exponents, ExactRationalMode) {
  const ExponentData e = exponents_from_mu(Rational(1, 2), Rational(1, 3), Rational(-1, 5));
  EXPECT_EQ(e.k0, Order::finite(2));
  EXPECT_EQ(e.k1, Order::finite(3));
  EXPECT_EQ(e.kInf, Order::finite(5));
  // 1/|mu| = 2.5 is not an integer
  EXPECT_FALSE(exponents_from_mu(Rational(2, 5), Rational(1, 2), Rational(1, 2)).k0.is_standard());
  // near-integer reciprocal accepted within tolerance in floating mode
  EXPECT_EQ(order_from_mu(1.0 / 7.0 + 1e-12), Order::finite(7));
  EXPECT_FALSE(order_from_mu(1.0 / 7.0 + 1e-6).is_standard());
}

TEST(Coefficients, FuchsianClosedForms) {
  const ExponentData e = exponents_from_orders(0, 0, 0);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int i = 0; i < 100; ++i) {
    const Complex x(U(rng), U(rng));
    const CoefficientValue v = eval_q(e, x);
    EXPECT_LT(std::abs(v.Q - (1.0 - x + x * x)), 1e-13 * (1 + std::norm(x)));
    EXPECT_LT(std::abs(v.R - (2.0 * x - 1.0) * (x * x - x + 2.0)), 1e-12 * (1 + std::pow(std::abs(x), 3)));
  }
  const CoefficientValue h = eval_q(e, 0.5);
  EXPECT_NEAR(h.Q.real(), 0.75, 1e-15);
  EXPECT_NEAR(h.q.real(), -3.0, 1e-14);
  EXPECT_THROW(eval_q(e, 0.0), std::domain_error);
  EXPECT_THROW(eval_q(e, 1.0 + 1e-13), std::domain_error);
}

TEST(Coefficients, QuadraticIdentity) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const ExponentData e = exponents_from_mu(U(rng), U(rng), U(rng));
    const Complex x(U(rng), U(rng));
    const CoefficientValue v = eval_q(e, x);
    const Complex A = x * (1.0 - x);
    const Complex rebuilt = -4.0 * A * A * v.q;
    EXPECT_LT(std::abs(rebuilt - v.Q), 1e-12 * std::max(1.0, std::abs(v.Q)));
  }
}

TEST(Coefficients, RIsNumeratorOfDerivative) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> U(-1.2, 1.2);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const ExponentData e = exponents_from_mu(U(rng), U(rng), U(rng));
    const Complex x(U(rng), U(rng));
    if (std::abs(x) < 0.2 || std::abs(1.0 - x) < 0.2) continue;
    const double h = 1e-6;
    const Complex fd = (eval_q(e, x + h).q - eval_q(e, x - h).q) / (2 * h);
    const Complex A = x * (1.0 - x);
    const Complex byR = -eval_q(e, x).R / (4.0 * A * A * A);
    EXPECT_LT(std::abs(fd - byR), 1e-6 * std::abs(byR));
    // R' against a central difference of R
    const Complex dR = (eval_QR(e, x + h).R - eval_QR(e, x - h).R) / (2 * h);
    EXPECT_LT(std::abs(dR - eval_QR(e, x).dR), 1e-6 * (1 + std::abs(dR)));
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Coefficients, PermutationSymmetry) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int i = 0; i < 200; ++i) {
    const double m0 = U(rng), m1 = U(rng), mi = U(rng);
    const Complex x(U(rng), U(rng));
    const Complex a = eval_QR(exponents_from_mu(m0, m1, mi), x).Q;
    const Complex b = eval_QR(exponents_from_mu(m1, m0, mi), 1.0 - x).Q;
    EXPECT_LT(std::abs(a - b), 1e-12 * (1 + std::abs(a)));
  }
}

TEST(Standard, Tags) {
  auto s = is_standard(exponents_from_orders(2, 2, 3));
  EXPECT_TRUE(s.standard);
  EXPECT_EQ(s.tag, CaseTag::Dihedral);
  EXPECT_EQ(s.dihedral_n, 3);
  EXPECT_EQ(group_order(s), 6);

  s = is_standard(exponents_from_orders(2, 3, 5));
  EXPECT_EQ(s.tag, CaseTag::Icosahedral);
  EXPECT_EQ(group_order(s), 60);
  EXPECT_EQ(is_standard(exponents_from_orders(3, 2, 5)).tag, CaseTag::Icosahedral);
  EXPECT_EQ(is_standard(exponents_from_orders(3, 2, 4)).tag, CaseTag::Octahedral);
  EXPECT_EQ(is_standard(exponents_from_orders(2, 3, 3)).tag, CaseTag::Tetrahedral);

  s = is_standard(exponents_from_orders(0, 0, 0));
  EXPECT_TRUE(s.standard);
  EXPECT_EQ(s.tag, CaseTag::FuchsianInfinite);
  EXPECT_FALSE(group_order(s).has_value());

  EXPECT_EQ(is_standard(exponents_from_orders(2, 3, 7)).tag, CaseTag::OtherFuchsian);
  EXPECT_EQ(is_standard(exponents_from_orders(2, 3, 6)).tag, CaseTag::Euclidean);
  EXPECT_FALSE(is_standard(exponents_from_abc(0.1, 0.2, 0.7)).standard);
}

TEST(Standard, GroupOrderFormula) {
  auto N = [](int a, int b, int c) {
    const ExponentData e = exponents_from_orders(a, b, c);
    return group_order(e.k0, e.k1, e.kInf);
  };
  EXPECT_EQ(N(2, 3, 4), 24);
  EXPECT_EQ(N(2, 2, 5), 10);
  EXPECT_EQ(N(2, 3, 3), 12);
  EXPECT_EQ(N(3, 2, 5), 60);
  EXPECT_FALSE(N(0, 0, 0).has_value());
}
