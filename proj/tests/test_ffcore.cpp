#include <gtest/gtest.h>

#include <random>

#include "carlitz/carlitz.hpp"
#include "oracle.hpp"

using namespace carlitz;

namespace {

PerfSeries X(const FieldPtr& f, Rational e = 1) { return PerfSeries::monomial(f, e); }

}  // namespace

TEST(Field, DefaultModuliAreIrreducibleAndFieldLawsHold) {
  for (auto [q, m] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}, {4, 1}, {4, 2}, {5, 1}, {5, 2}, {8, 1}, {9, 1}, {9, 2}}) {
    auto f = Field::for_q(q, m);
    const std::uint32_t Q = f->order();
    std::uint32_t expect = 1;
    for (int i = 0; i < m; ++i) expect *= static_cast<std::uint32_t>(q);
    EXPECT_EQ(Q, expect);
    for (Field::Code a = 0; a < Q; ++a) {
      EXPECT_EQ(f->pow(a, Q), a) << "xi^Q = xi fails for q=" << q << " m=" << m;
      EXPECT_EQ(f->frobenius(f->frobenius(a, -1), 1), a);
      if (a != 0) EXPECT_EQ(f->mul(a, f->inv(a)), 1u);
    }
  }
}

TEST(Field, ArbitraryModulusAcceptedAndReducibleRejected) {
  FieldParams fp{2, 1, 3, {1, 0, 1, 1}};  // x^3 + x^2 + 1
  auto f = Field::make(fp);
  EXPECT_EQ(f->order(), 8u);
  FieldParams bad{2, 1, 2, {1, 0, 1}};  // (x+1)^2
  EXPECT_THROW(Field::make(bad), ParameterError);
  FieldParams bad4{2, 1, 4, {1, 0, 1, 0, 1}};  // (x^2+x+1)^2, no roots
  EXPECT_THROW(Field::make(bad4), ParameterError);
}

TEST(Series, AddExamples) {
  auto f = Field::for_q(2);
  EXPECT_TRUE((X(f) + X(f)).is_exact_zero());
  PerfSeries b1 = X(f, 2) + X(f);
  EXPECT_TRUE((b1 + PerfSeries::zero(f)).identical(b1));
  // Oracle: coefficient-wise addition over F_2.
  auto o = oracle::Poly::mono(2, oracle::exp_of(4)) + oracle::Poly::x(2) + oracle::Poly::mono(2, oracle::exp_of(4)) +
           oracle::Poly::mono(2, oracle::exp_of(2));
  EXPECT_TRUE(oracle::same(oracle::from_series((X(f, 4) + X(f)) + (X(f, 4) + X(f, 2))), o));
  EXPECT_EQ(((X(f, 4) + X(f)) + (X(f, 4) + X(f, 2))).to_string(), "x + x^2");
}

TEST(Series, MulExamples) {
  auto f = Field::for_q(2);
  PerfSeries b1 = X(f, 2) + X(f);
  EXPECT_TRUE((b1 * b1).identical(X(f, 4) + X(f, 2)));
  PerfSeries prod = (X(f, 4) + X(f)) * (X(f, 4) + X(f, 2));
  auto o = (oracle::Poly::mono(2, oracle::exp_of(4)) + oracle::Poly::x(2)) *
           (oracle::Poly::mono(2, oracle::exp_of(4)) + oracle::Poly::mono(2, oracle::exp_of(2)));
  EXPECT_TRUE(oracle::same(oracle::from_series(prod), o));
  EXPECT_EQ(prod.to_string(), "x^3 + x^5 + x^6 + x^8");
  EXPECT_TRUE((b1 * PerfSeries::one(f)).identical(b1));
}

TEST(Series, MulPrecisionBookkeeping) {
  auto f = Field::for_q(3);
  PerfSeries a = (PerfSeries::one(f) + X(f)).truncated(5);  // val 0, prec 5
  PerfSeries b = X(f, 2) + X(f, 3);                        // exact, val 2
  PerfSeries c = a * b;
  ASSERT_TRUE(c.precision());
  EXPECT_EQ(*c.precision(), Rational(7));
  EXPECT_TRUE((X(f) * X(f, Rational(1, 3))).is_exact());
}

TEST(Series, InvertExamples) {
  auto f = Field::for_q(2);
  EXPECT_TRUE(X(f).inverse().identical(X(f, -1)));
  PerfSeries inv = (PerfSeries::one(f) + X(f)).truncated(4).inverse();
  // Oracle: geometric series over F_2 below x^4.
  EXPECT_EQ(inv.to_string(), "1 + x + x^2 + x^3 + O(x^4)");
  EXPECT_THROW(PerfSeries::zero(f).inverse(), PrecisionError);
  EXPECT_THROW(PerfSeries::big_oh(f, 3).inverse(), PrecisionError);
}

TEST(Series, InverseTimesSelfIsOne) {
  std::mt19937_64 rng(11);
  for (int q : {2, 3, 4, 5}) {
    auto f = Field::for_q(q);
    for (int t = 0; t < 20; ++t) {
      PerfSeries a = random_nonzero_series(f, rng, {4, -2, 3, 2});
      PerfSeries prod = a * a.inverse();
      EXPECT_TRUE(prod.equals_at_precision(PerfSeries::one(f))) << a;
    }
  }
}

TEST(Series, FrobeniusExamples) {
  auto f = Field::for_q(2);
  PerfSeries b1 = X(f, 2) + X(f);
  EXPECT_TRUE(b1.frobenius(1).identical(X(f, 4) + X(f, 2)));
  EXPECT_TRUE(b1.frobenius(-1).identical(X(f) + X(f, Rational(1, 2))));
  EXPECT_EQ(b1.frobenius(-1).to_string(), "x^(1/2) + x");
  std::mt19937_64 rng(5);
  for (int q : {2, 3, 4, 9}) {
    auto g = Field::for_q(q, q == 4 ? 2 : 1);
    for (int t = 0; t < 10; ++t) {
      PerfSeries a = random_series(g, rng, {4, -1, 3, 2});
      EXPECT_TRUE(a.frobenius(-3).frobenius(3).identical(a));
    }
  }
}

TEST(Series, FrobeniusIsARingHomomorphism) {
  std::mt19937_64 rng(8);
  for (int q : {2, 3, 4}) {
    auto f = Field::for_q(q, 2);
    for (int t = 0; t < 20; ++t) {
      PerfSeries a = random_series(f, rng, {3, -1, 3, 1}), b = random_series(f, rng, {3, -1, 3, 1});
      for (int e : {-2, -1, 1, 2}) {
        EXPECT_TRUE((a + b).frobenius(e).identical(a.frobenius(e) + b.frobenius(e)));
        EXPECT_TRUE((a * b).frobenius(e).identical(a.frobenius(e) * b.frobenius(e)));
      }
      // The q-th power by multiplication matches the Frobenius.
      EXPECT_TRUE(a.pow(q).identical(a.frobenius(1)));
    }
  }
}

TEST(Series, ValuationExamples) {
  auto f = Field::for_q(2);
  PerfSeries d2 = X(f, 8) + X(f, 6) + X(f, 5) + X(f, 3);
  EXPECT_EQ(d2.valuation().value, Rational(3));
  EXPECT_TRUE(PerfSeries::zero(f).valuation().infinite());
  EXPECT_EQ((X(f, Rational(1, 2)) + X(f)).valuation().value, Rational(1, 2));
  auto lb = PerfSeries::big_oh(f, 7).valuation();
  EXPECT_TRUE(lb.at_least());
  EXPECT_EQ(lb.value, Rational(7));
}

TEST(Series, FieldAxiomsAndValuationLaws) {
  std::mt19937_64 rng(21);
  for (int q : {2, 3, 4}) {
    auto f = Field::for_q(q);
    for (int t = 0; t < 30; ++t) {
      PerfSeries a = random_nonzero_series(f, rng, {4, -2, 4, 1});
      PerfSeries b = random_nonzero_series(f, rng, {4, -2, 4, 1});
      PerfSeries c = random_series(f, rng, {4, -2, 4, 1});
      EXPECT_TRUE(((a * b) * c).identical(a * (b * c)));
      EXPECT_TRUE((a * (b + c)).identical(a * b + a * c));
      EXPECT_TRUE((a * b).identical(b * a));
      EXPECT_TRUE((a + b).identical(b + a));
      EXPECT_EQ((a * b).valuation().value, a.valuation().value + b.valuation().value);
      PerfSeries s = a + b;
      if (!s.is_exact_zero()) {
        const Rational va = a.valuation().value, vb = b.valuation().value;
        EXPECT_GE(s.valuation().value, std::min(va, vb));
        if (va != vb) EXPECT_EQ(s.valuation().value, std::min(va, vb));
      }
      // Against the naive oracle for prime q.
      if (q != 4) {
        EXPECT_TRUE(oracle::same(oracle::from_series(a * b), oracle::from_series(a) * oracle::from_series(b)));
      }
    }
  }
}

TEST(Series, EqualityUpToPrecision) {
  auto f = Field::for_q(3);
  PerfSeries a = PerfSeries::one(f) + X(f) + X(f, 5);
  PerfSeries b = (PerfSeries::one(f) + X(f)).truncated(4);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a.identical(b));
  EXPECT_FALSE(a == PerfSeries::one(f));
  EXPECT_THROW(b.coefficient(4), PrecisionError);
  EXPECT_EQ(b.coefficient(1), 1u);
}

TEST(Series, MismatchedFieldsAreRejected) {
  auto f2 = Field::for_q(2), f3 = Field::for_q(3);
  EXPECT_THROW(X(f2) + X(f3), ParameterError);
  EXPECT_THROW(X(f2) * X(f3), ParameterError);
}

TEST(Series, ConstantFieldElementRoots) {
  auto f = Field::for_q(4, 2);
  for (Field::Code a = 0; a < f->order(); ++a) {
    ConstantFieldElement e(f, a);
    EXPECT_EQ(e.frobenius(-1).frobenius(1), e);
  }
}

TEST(Rational, QAdicNormalization) {
  EXPECT_EQ(Rational::q_adic(6, 1, 3), Rational(2));
  EXPECT_EQ(Rational::q_adic(1, 2, 2), Rational(1, 4));
  EXPECT_EQ(Rational(1, 9).q_dexp(3), 2);
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
}
