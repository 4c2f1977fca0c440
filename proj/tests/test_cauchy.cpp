#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "carlitz/carlitz.hpp"
#include "helpers.hpp"

using namespace carlitz;

namespace {

PerfSeries X(const FieldPtr& f, Rational e = 1) { return PerfSeries::monomial(f, e); }

/// P = t - a, Q = t - b in one variable.
EvolutionEquation raw_linear(const PerfSeries& a, const PerfSeries& b) {
  const auto& f = a.field();
  return EvolutionEquation(MultiPoly::variable(f, 1, 1) - MultiPoly::constant(a, 1),
                           MultiPoly::variable(f, 1, 1) - MultiPoly::constant(b, 1));
}

std::string refusal_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const RefusalError& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(Cauchy, FirstStepExample) {
  // c_{1,1} = -c_{0,0}^q (P(0)/Q(0))^q = -(a/b)^q; in characteristic 2 the sign disappears.
  for (int q : {2, 3}) {
    auto f = Field::for_q(q);
    auto eq = raw_linear(X(f, 3), X(f, 2));
    MultiFunction u = cauchy_solve(eq, delta_initial_data(f, 1), 3, 3);
    PerfSeries expect = X(f, q);
    if (q == 3) expect = -expect;
    EXPECT_TRUE(u.coefficient({1, 1}).equals_at_precision(expect)) << u.coefficient({1, 1});
    EXPECT_TRUE(u.coefficient({0, 0}).identical(PerfSeries::one(f)));
  }
}

TEST(Cauchy, ResidualVanishes) {
  std::mt19937_64 rng(61);
  for (int q : {2, 3}) {
    auto f = Field::for_q(q);
    for (int n = 1; n <= 2; ++n)
      for (int t = 0; t < 4; ++t) {
        std::vector<PerfSeries> a, b;
        for (int k = 0; k < n; ++k) {
          a.push_back(random_nonzero_series(f, rng, {2, 0, 3, 1}));
          b.push_back(PerfSeries::monomial(f, Rational(1, 2 * q)) + random_series(f, rng, {1, 1, 3, 1}));
        }
        auto eq = product_equation(a, b, n);
        InitialData init = delta_initial_data(f, n);
        init.insert_or_assign(std::vector<int>(n, 1), random_nonzero_series(f, rng));
        MultiFunction u = cauchy_solve(eq, init, 4, 5);
        EXPECT_TRUE(residual(eq, u).is_zero_at_precision());
      }
  }
}

TEST(Cauchy, AdmissibilityFailures) {
  auto f = Field::for_q(2);
  // Q = t - [2] vanishes at i = 2.
  EvolutionEquation e1(MultiPoly::constant(PerfSeries::one(f), 1),
                       MultiPoly::variable(f, 1, 1) - MultiPoly::constant(bracket(f, 2), 1));
  auto r1 = admissibility_check(e1, 3);
  EXPECT_EQ(r1.status, AdmissibilityReport::Status::Failure);
  EXPECT_EQ(tuple_to_string(r1.offending), "(2)");
  EXPECT_EQ(refusal_code([&] { cauchy_solve(e1, delta_initial_data(f, 1), 3, 3); }), "inadmissible");
  EXPECT_TRUE(admissibility_check(e1, 1).ok());  // [2] is not checked
  // Q = t + x vanishes at [∞] = -x only.
  EvolutionEquation e2(MultiPoly::constant(PerfSeries::one(f), 1), MultiPoly::variable(f, 1, 1) + MultiPoly::constant(X(f), 1));
  auto r2 = admissibility_check(e2, 4);
  EXPECT_EQ(r2.status, AdmissibilityReport::Status::Failure);
  EXPECT_EQ(tuple_to_string(r2.offending), "(inf)");
  EXPECT_EQ(refusal_code([&] { cauchy_solve(e2, delta_initial_data(f, 1), 2, 2); }), "inadmissible");
  // Q = t + x + O(x^6) is zero at precision on [∞].
  EvolutionEquation e3(MultiPoly::constant(PerfSeries::one(f), 1),
                       MultiPoly::variable(f, 1, 1) + MultiPoly::constant((X(f) + X(f, 9)).truncated(6), 1));
  EXPECT_EQ(admissibility_check(e3, 2).status, AdmissibilityReport::Status::Indeterminate);
  EXPECT_EQ(refusal_code([&] { cauchy_solve(e3, delta_initial_data(f, 1), 2, 2); }), "indeterminate");
}

TEST(Cauchy, AdmissibleReportAndRecommendedImax) {
  auto f = Field::for_q(3);
  auto eq = raw_linear(X(f), X(f, 2));
  auto rep = admissibility_check(eq, 3);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.checked, 5);
  // val Q([i]) = 1 for i >= 1, 2 at i = 0; max is 2 from i = 0.
  EXPECT_EQ(rep.max_valuation, Rational(2));
  auto I = recommend_imax(eq);
  ASSERT_TRUE(I);
  // Oracle: beyond I the value t = [i] has valuation 1 and q^{i} grows; q^{I+1} + 0 > 2 at I = 0.
  EXPECT_EQ(*I, 0);
}

TEST(Cauchy, ZeroDataGivesZero) {
  auto f = Field::for_q(2);
  auto eq = raw_linear(X(f, 3), X(f, 2));
  EXPECT_TRUE(cauchy_solve(eq, {}, 4, 4).coefficients().empty());
}

TEST(Cauchy, SolutionIsAdditiveInTheData) {
  std::mt19937_64 rng(67);
  for (int q : {2, 3}) {
    auto f = Field::for_q(q);
    auto eq = product_equation({X(f, 2) + PerfSeries::one(f)}, {X(f, Rational(1, q))}, 2);
    for (int t = 0; t < 5; ++t) {
      InitialData d1, d2, sum;
      for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j) {
          PerfSeries a = random_series(f, rng), b = random_series(f, rng);
          d1.insert_or_assign({i, j}, a);
          d2.insert_or_assign({i, j}, b);
          sum.insert_or_assign({i, j}, a + b);
        }
      MultiFunction u1 = cauchy_solve(eq, d1, 3, 5), u2 = cauchy_solve(eq, d2, 3, 5), us = cauchy_solve(eq, sum, 3, 5);
      EXPECT_TRUE(us.equals_on_common_support(u1 + u2));
    }
  }
}

TEST(Cauchy, UniquenessFromData) {
  // Two solutions of the same problem agree; any change to c_{0,i} is visible.
  auto f = Field::for_q(3);
  auto eq = product_equation({X(f)}, {X(f, 2) + X(f, Rational(1, 3))}, 1);
  InitialData d{{{0}, PerfSeries::one(f)}, {{2}, X(f)}};
  MultiFunction a = cauchy_solve(eq, d, 5, 6), b = cauchy_solve(eq, d, 5, 6);
  EXPECT_TRUE(a.equals_on_common_support(b));
  d.insert_or_assign({1}, PerfSeries::one(f));
  EXPECT_FALSE(cauchy_solve(eq, d, 5, 6).equals_on_common_support(a));
}

TEST(Cauchy, SupportFollowsTheDiagonals) {
  auto f = Field::for_q(2);
  auto eq = product_equation({X(f)}, {X(f, Rational(1, 2))}, 1);
  InitialData d{{{1}, PerfSeries::one(f)}};
  MultiFunction u = cauchy_solve(eq, d, 4, 6);
  for (const auto& [idx, c] : u.coefficients()) EXPECT_EQ(idx[1] - idx[0], 1);
  EXPECT_EQ(u.coefficients().size(), 5u);
}

TEST(Cauchy, DeltaDataSolutionMatchesRecursionOracle) {
  // Oracle: c_{m,m} = -c_{m-1,m-1}^q (P([m-1]) / Q([m-1]))^q computed step by step here.
  auto f = Field::for_q(3);
  PerfSeries a = X(f) + X(f, 2), b = X(f, Rational(1, 3));
  auto eq = product_equation({a}, {b}, 1);
  MultiFunction u = cauchy_solve(eq, delta_initial_data(f, 1), 5, 5);
  PerfSeries c = PerfSeries::one(f);
  for (int m = 1; m <= 5; ++m) {
    PerfSeries br = bracket(f, m - 1);
    PerfSeries ratio = (br - a) * (-(br - b)).inverse();
    c = -(c * ratio).frobenius(1);
    EXPECT_TRUE(u.coefficient({m, m}).equals_at_precision(c)) << m;
  }
}

TEST(Cauchy, GrowthCheck) {
  auto f = Field::for_q(2);
  auto eq = product_equation({X(f)}, {X(f, Rational(1, 2))}, 1);
  MultiFunction u = cauchy_solve(eq, delta_initial_data(f, 1), 5, 5);
  auto rep = growth_check(u, Rational(0), Rational(10));
  EXPECT_TRUE(rep.passes);
  // Tightest constants pass; anything smaller fails.
  auto tight = growth_check(u, Rational(0), rep.tightest_log_c);
  EXPECT_TRUE(tight.passes);
  EXPECT_FALSE(growth_check(u, Rational(0), rep.tightest_log_c - Rational(1, 64)).passes);
  // Corrupt one coefficient with a huge pole.
  MultiFunction bad = u;
  bad.set({3, 3}, X(f, -1000));
  EXPECT_FALSE(growth_check(bad, Rational(0), Rational(10)).passes);
}

TEST(Cauchy, ProductEquationSignConvention) {
  // With Q = -Π(t - b) the diagonal is the Pochhammer ratio ⟨a⟩_m / ⟨b⟩_m.
  for (int q : {2, 3}) {
    auto f = Field::for_q(q);
    PerfSeries a = X(f) + PerfSeries::one(f), b = X(f, Rational(1, q));
    MultiFunction u = cauchy_solve(product_equation({a}, {b}, 1), delta_initial_data(f, 1), 4, 4);
    for (int m = 0; m <= 4; ++m)
      EXPECT_TRUE(u.coefficient({m, m}).equals_at_precision(pochhammer(a, m) * pochhammer(b, m).inverse())) << m;
  }
}
