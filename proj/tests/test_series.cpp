// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <optional>

#include "parlog/series.hpp"
#include "support.hpp"

namespace parlog {
namespace {

using testing::Rng;

const Variable kT{VarTag::T, 1};

LaurentSeries lit(const std::string& s, int r = 1, int n = 12) {
  auto l = parse_series(s);
  return l.realize(l.tag.value_or(VarTag::T), r, n);
}

// Dense product with explicit unknowns: coefficient k is known when no
// pair (i, k - i) pairs an unknown coefficient with a possibly nonzero one.
struct DenseOracle {
  std::map<int, Rational> terms;
  int truncation;
};

DenseOracle convolve(const LaurentSeries& a, const LaurentSeries& b) {
  const int lo = std::min(a.valuation_bound(), a.truncation()) + std::min(b.valuation_bound(), b.truncation()) - 2;
  const int hi = a.truncation() + b.truncation() + 4;
  auto coeff = [](const LaurentSeries& s, int k) -> std::optional<Rational> {
    if (k > s.truncation()) return std::nullopt;
    auto it = s.terms().find(k);
    return it == s.terms().end() ? Rational(0) : it->second;
  };
  DenseOracle out{{}, hi};
  for (int k = lo; k <= hi; ++k) {
    Rational acc;
    bool known = true;
    for (int i = lo - 4; i <= hi + 4; ++i) {
      auto x = coeff(a, i);
      auto y = coeff(b, k - i);
      if (x && y) {
        acc += *x * *y;
        continue;
      }
      const bool x_zero = x && x->is_zero();
      const bool y_zero = y && y->is_zero();
      // Below the lowest stored term every coefficient is a known zero.
      const bool x_below = i < a.valuation_bound();
      const bool y_below = (k - i) < b.valuation_bound();
      if (x_zero || y_zero || x_below || y_below) continue;
      known = false;
    }
    if (!known) {
      out.truncation = k - 1;
      break;
    }
    if (!acc.is_zero()) out.terms.emplace(k, acc);
  }
  for (auto it = out.terms.begin(); it != out.terms.end();)
    it = it->first > out.truncation ? out.terms.erase(it) : std::next(it);
  return out;
}

TEST(SeriesAdd, CancellationKeepsTruncation) {
  auto s = lit("t + t^2") + lit("-t");
  EXPECT_EQ(s, lit("t^2"));
  EXPECT_EQ(s.truncation(), 12);
}

TEST(SeriesAdd, ZeroIsIdentity) {
  auto a = lit("1/2*t^-1 + 3*t^2");
  EXPECT_EQ(a + LaurentSeries(kT, 12), a);
}

TEST(SeriesAdd, RationalArithmetic) { EXPECT_EQ(lit("1/2*t^-1") + lit("1/2*t^-1"), lit("t^-1")); }

TEST(SeriesAdd, TruncationIsMinimum) {
  auto s = lit("t + O(t^5)") + lit("t^7");
  EXPECT_EQ(s.truncation(), 4);
  EXPECT_EQ(s, lit("t + O(t^5)"));
}

TEST(SeriesAdd, VariableMismatch) {
  EXPECT_THROW(lit("t") + lit("z"), Error);
  EXPECT_THROW(lit("t", 2) + lit("t", 3), Error);
}

TEST(SeriesMul, Examples) {
  EXPECT_EQ(lit("t^-1") * lit("t"), lit("1").truncated(11));
  EXPECT_EQ(lit("1 + t") * lit("1 - t"), lit("1 - t^2"));
}

TEST(SeriesMul, SquareMatchesConvolutionOracle) {
  const auto a = lit("t^-1 + 1");
  const auto sq = a * a;
  const auto oracle = convolve(a, a);
  EXPECT_EQ(sq.terms(), oracle.terms);
  EXPECT_EQ(sq.truncation(), oracle.truncation);
  EXPECT_EQ(sq.coefficient(-2), Rational(1));
  EXPECT_EQ(sq.coefficient(-1), Rational(2));
  EXPECT_EQ(sq.coefficient(0), Rational(1));
  EXPECT_EQ(sq.truncation(), 11);
}

TEST(SeriesMul, RandomAgainstConvolutionOracle) {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const int na = testing::uniform(rng, 0, 8);
    const int nb = testing::uniform(rng, 0, 8);
    auto a = testing::random_series(rng, kT, -3, na, na);
    auto b = testing::random_series(rng, kT, -3, nb, nb);
    const auto prod = a * b;
    const auto oracle = convolve(a, b);
    ASSERT_EQ(prod.truncation(), oracle.truncation) << a << " * " << b;
    ASSERT_EQ(prod.terms(), oracle.terms) << a << " * " << b;
  }
}

TEST(SeriesMul, ZeroFactorKnownEverywhereItCan) {
  // 0 with truncation 3 times t^-2: product known up to 3 - 2 = 1.
  auto p = LaurentSeries(kT, 3) * lit("t^-2");
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.truncation(), 1);
}

TEST(SeriesInverse, Examples) {
  EXPECT_EQ(series_inverse(lit("t")), lit("t^-1").truncated(10));
  auto geo = series_inverse(lit("1 - t"));
  EXPECT_EQ(geo.truncation(), 12);
  for (int k = 0; k <= 12; ++k) EXPECT_EQ(geo.coefficient(k), Rational(1));
  EXPECT_EQ(series_inverse(lit("2*t^2")), lit("1/2*t^-2").truncated(8));
}

TEST(SeriesInverse, ZeroSeriesThrows) {
  try {
    series_inverse(LaurentSeries(kT, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroSeries);
  }
}

TEST(SeriesInverse, RandomUnitsInvert) {
  Rng rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    const int ord = testing::uniform(rng, -3, 3);
    auto a = testing::random_unit(rng, kT, ord, 12);
    auto prod = a * series_inverse(a);
    ASSERT_GE(prod.truncation(), 0);
    ASSERT_TRUE(prod.equal_up_to(LaurentSeries::monomial(kT, Rational(1), 0, prod.truncation()), prod.truncation())) << a;
  }
}

TEST(SeriesDerivative, Examples) {
  EXPECT_EQ(series_derivative(lit("t^5")), lit("5*t^4").truncated(11));
  EXPECT_TRUE(series_derivative(lit("7")).is_zero());
  EXPECT_EQ(series_derivative(lit("t^-1")), lit("-t^-2").truncated(11));
  EXPECT_EQ(series_derivative(lit("t^5")).truncation(), 11);
}

TEST(SeriesDerivative, Leibniz) {
  Rng rng(303);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = testing::random_series(rng, kT, -2, 10, 10);
    auto b = testing::random_series(rng, kT, -2, 10, 10);
    auto lhs = series_derivative(a * b);
    auto rhs = series_derivative(a) * b + a * series_derivative(b);
    const int n = std::min(lhs.truncation(), rhs.truncation());
    ASSERT_TRUE(lhs.equal_up_to(rhs, n)) << a << " ; " << b;
  }
}

TEST(SeriesRing, Axioms) {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = testing::random_series(rng, kT, -2, 8, 8);
    auto b = testing::random_series(rng, kT, -2, 8, 8);
    auto c = testing::random_series(rng, kT, -2, 8, 8);
    auto l1 = (a * b) * c, r1 = a * (b * c);
    ASSERT_TRUE(l1.equal_up_to(r1, std::min(l1.truncation(), r1.truncation())));
    auto l2 = a * (b + c), r2 = a * b + a * c;
    ASSERT_TRUE(l2.equal_up_to(r2, std::min(l2.truncation(), r2.truncation())));
    ASSERT_EQ(a + b, b + a);
    ASSERT_EQ(a * b, b * a);
    ASSERT_EQ((a + b) + c, a + (b + c));
  }
}

TEST(Substitute, Examples) {
  EXPECT_EQ(substitute_t_to_z(lit("t^4", 2)).terms(), (std::map<int, Rational>{{2, Rational(1)}}));
  auto s = substitute_t_to_z(lit("t^2 + t^6", 2));
  EXPECT_EQ(s.terms(), (std::map<int, Rational>{{1, Rational(1)}, {3, Rational(1)}}));
  EXPECT_EQ(s.variable(), Variable(VarTag::Z, 2));
  EXPECT_EQ(s.truncation(), 6);
  try {
    substitute_t_to_z(lit("t", 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonIntegralExponent);
  }
}

TEST(Substitute, NegativeTruncationFloors) {
  auto s = substitute_t_to_z(LaurentSeries(Variable(VarTag::T, 3), {}, -1));
  EXPECT_EQ(s.truncation(), -1);
}

TEST(Substitute, ScaleThenSubstituteIsIdentity) {
  Rng rng(505);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = testing::uniform(rng, 1, 6);
    auto z = testing::random_series(rng, Variable(VarTag::Z, r), -3, 9, 9);
    auto t = substitute_z_to_t(z);
    EXPECT_EQ(t.truncation(), 9 * r + r - 1);
    ASSERT_EQ(substitute_t_to_z(t), z);
  }
}

TEST(MuWeight, Examples) {
  EXPECT_EQ(mu_r_weight(lit("t", 3)), 2);
  EXPECT_EQ(mu_r_weight(lit("1 + t^3", 3)), 0);
  EXPECT_EQ(mu_r_weight(lit("1 + t", 2)), std::nullopt);
  EXPECT_EQ(mu_r_weight(LaurentSeries(Variable(VarTag::T, 4), 5)), 0);
}

TEST(MuWeight, AdditiveUnderProduct) {
  Rng rng(606);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = testing::uniform(rng, 2, 6);
    const int wa = testing::uniform(rng, 0, r - 1), wb = testing::uniform(rng, 0, r - 1);
    auto a = testing::random_homogeneous(rng, r, wa, -4, 10, 10);
    auto b = testing::random_homogeneous(rng, r, wb, -4, 10, 10);
    auto prod = a * b;
    if (prod.is_zero()) continue;
    ASSERT_EQ(mu_r_weight(prod), static_cast<int>(mod_floor(wa + wb, r)));
  }
}

TEST(SeriesLiteral, ParseAndPrint) {
  auto s = lit("1/2*t^-1 + 3*t^2 + O(t^13)");
  EXPECT_EQ(s.truncation(), 12);
  EXPECT_EQ(s.str(), "1/2*t^-1 + 3*t^2 + O(t^13)");
  EXPECT_EQ(lit("-t^3 - 2/3*t").str(), "-2/3*t - t^3 + O(t^13)");
  EXPECT_EQ(lit("0").str(), "O(t^13)");
  EXPECT_EQ(lit("z^2 + O(z^4)").variable().tag, VarTag::Z);
}

TEST(SeriesLiteral, Errors) {
  for (const char* bad : {"", "t +", "1/0*t", "t + z", "t^x", "O(t^3) + t", "3 t", "2*O(t^3)"}) {
    EXPECT_THROW(parse_series(bad), Error) << bad;
  }
  EXPECT_THROW(parse_series("t^20 + O(t^5)"), Error);
}

TEST(SeriesLiteral, RoundTripRandom) {
  Rng rng(707);
  for (int trial = 0; trial < 200; ++trial) {
    SeriesLiteral l;
    l.tag = testing::coin(rng) ? VarTag::T : VarTag::Z;
    l.terms = testing::sparse_terms(rng, -3, 6);
    if (testing::coin(rng)) l.big_o = 7;
    ASSERT_EQ(parse_series(format_literal(l)), l) << format_literal(l);
  }
}

TEST(SeriesCoefficient, AboveTruncationThrows) {
  auto s = lit("t + O(t^3)");
  EXPECT_EQ(s.coefficient(2), Rational(0));
  try {
    s.coefficient(3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TruncationExhausted);
  }
}

}  // namespace
}  // namespace parlog
