#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "carlitz/carlitz.hpp"
#include "helpers.hpp"

using namespace carlitz;

TEST(Parse, SeriesExamples) {
  auto f = Field::for_q(2);
  EXPECT_TRUE(parse_series("x^2 + x", f).identical(bracket(f, 1)));
  EXPECT_TRUE(parse_series("0", f).is_exact_zero());
  EXPECT_TRUE(parse_series("x^(1/2) + x", f).identical(bracket(f, -1)));
  EXPECT_TRUE(parse_series("x^(1/q^1) + x", f).identical(bracket(f, -1)));
  EXPECT_TRUE(parse_series("(1 + x)*(1 + x)", f).identical(parse_series("1 + x^2", f)));
  EXPECT_TRUE(parse_series("x^-2", f).identical(PerfSeries::monomial(f, -2)));
  PerfSeries big = parse_series("1 + x + O(x^4)", f);
  ASSERT_TRUE(big.precision());
  EXPECT_EQ(*big.precision(), Rational(4));
  auto f4 = Field::for_q(4);
  EXPECT_TRUE(parse_series("g*x", f4).identical(PerfSeries::constant(f4, f4->generator()) * PerfSeries::x(f4)));
}

TEST(Parse, SyntaxErrorsCarrySpans) {
  auto f = Field::for_q(3);
  try {
    parse_series("x^(1/2)", f);
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    // The span covers the exponent token "(1/2)".
    EXPECT_EQ(e.begin(), 2u);
    EXPECT_EQ(e.end(), 7u);
  }
  EXPECT_THROW(parse_series("x + ", f), SyntaxError);
  EXPECT_THROW(parse_series("x + y", f), SyntaxError);
  EXPECT_THROW(parse_series("(x + 1", f), SyntaxError);
  EXPECT_THROW(parse_series("tau", f), SyntaxError);
  EXPECT_THROW(parse_operator("delta3", f, 2), SyntaxError);
  EXPECT_THROW(parse_operator("tau*frob", f, 1), SyntaxError);
}

TEST(Parse, OperatorExamples) {
  for (int q : {2, 3}) {
    auto f = Field::for_q(q);
    NormalForm comm = normalize(parse_operator("d*tau - tau*d", f, 1));
    NormalForm expect{f, 1, Convention::Standard, {{{0, 0, 0}, bracket(f, 1).frobenius(-1)}}};
    EXPECT_EQ(comm, expect);
    NormalForm t = normalize(parse_operator("tau", f, 0));
    ASSERT_EQ(t.terms.size(), 1u);
    EXPECT_EQ(t.terms.begin()->first, (NFKey{1, 0}));
    // (Δ_1 - [1]) d
    NormalForm g = normalize(parse_operator("(delta1 - (x^" + std::to_string(q) + " - x))*d", f, 1));
    NormalForm ge{f, 1, Convention::Standard, {{{0, 1, 1}, PerfSeries::one(f)}}};
    // Δd = dΔ - [1]^{1/q} d, so the factor is dΔ - ([1]^{1/q} + [1]) d.
    ge.terms.insert_or_assign(NFKey{0, 1, 0}, -(bracket(f, 1).frobenius(-1) + bracket(f, 1)));
    EXPECT_EQ(g, ge);
    EXPECT_EQ(normalize(parse_operator("tau^3", f, 0)), normalize(parse_operator("tau*tau*tau", f, 0)));
  }
}

TEST(Print, NormalFormText) {
  auto f = Field::for_q(2);
  EXPECT_EQ(to_string(normalize(parse_operator("d*tau", f, 0))), "(x^(1/2) + x) + tau*d");
  EXPECT_EQ(to_string(normalize(OperatorSum::zero(f, 1))), "0");
}

TEST(RoundTrip, RandomSeries) {
  std::mt19937_64 rng(107);
  for (auto [q, m] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {4, 2}, {5, 1}, {9, 1}}) {
    auto f = Field::for_q(q, m);
    for (int t = 0; t < 40; ++t) {
      PerfSeries s = random_series(f, rng, {4, -3, 4, 2});
      if (t % 3 == 0) s = s.truncated(Rational(5));
      PerfSeries back = parse_series(s.to_string(), f);
      EXPECT_TRUE(back.identical(s)) << s.to_string();
      EXPECT_EQ(back.to_string(), s.to_string());
      ParseNode tree = parse_tree(s.to_string());
      EXPECT_EQ(parse_tree(tree.to_string()), tree);
    }
  }
}

TEST(RoundTrip, RandomOperators) {
  std::mt19937_64 rng(109);
  for (int q : {2, 3}) {
    auto f = Field::for_q(q);
    for (int n = 0; n <= 2; ++n)
      for (int t = 0; t < 15; ++t)
        for (Convention c : {Convention::Standard, Convention::Alt}) {
          NormalForm a = normalize(testutil::random_expr(f, n, 3, 5, rng), c);
          std::string text = to_string(a);
          EXPECT_EQ(normalize(parse_operator(text, f, n), c), a) << text;
          ParseNode tree = parse_tree(text);
          EXPECT_EQ(parse_tree(tree.to_string()), tree);
        }
  }
}

TEST(RoundTrip, ProblemFiles) {
  std::istringstream cp(
      "# a small problem\n"
      "field q=3\n"
      "n = 1\n"
      "P 1 : 1\n"
      "P 0 : -x\n"
      "Q 1 : -1\n"
      "Q 0 : x^(1/3)\n"
      "init 0 : 1\n"
      "truncM = 4\n"
      "truncI = 4\n");
  CauchyProblem pr = parse_cauchy_problem(cp, Field::for_q(2));
  EXPECT_EQ(pr.field->q(), 3);
  EXPECT_EQ(pr.trunc_m, 4);
  auto eq = pr.equation();
  auto expect = product_equation({PerfSeries::x(pr.field)}, {PerfSeries::monomial(pr.field, Rational(1, 3))}, 1);
  MultiFunction a = cauchy_solve(eq, pr.initial_data(), 4, 4), b = cauchy_solve(expect, delta_initial_data(pr.field, 1), 4, 4);
  EXPECT_EQ(serialize(a), serialize(b));

  std::istringstream hp("field q=2\na = x\nb = x^(1/2)\nz = x^3\nM = 4\n");
  HyperProblem hpr = parse_hyper_problem(hp, Field::for_q(3));
  EXPECT_EQ(hpr.field->q(), 2);
  EXPECT_EQ(hpr.a.size(), 1u);
  EXPECT_EQ(hpr.M, 4);
  std::istringstream bad("frobnicate = 1\n");
  EXPECT_THROW(parse_hyper_problem(bad, Field::for_q(2)), ParameterError);
}
