// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "parlog/parahoric.hpp"
#include "support.hpp"

namespace parlog {
namespace {

using testing::Rng;

RootSystemPtr sl(int n) { return make_root_system(RootSystem::type_a(n - 1)); }

struct Sl2Half {
  RootSystemPtr rs = sl(2);
  Coweight theta{rs, 2, {Rational(1, 2)}};
  ParahoricAlgebra p{theta};
  Variable z{VarTag::Z, 2};

  LieAlgebraElement elem(std::vector<std::pair<BasisLabel, LaurentSeries>> parts, int n = 12) const {
    auto x = LieAlgebraElement::zero(rs, z, n);
    for (auto& [l, s] : parts) x = x.with(l, s);
    return x;
  }
  LaurentSeries mono(Rational c, int k, int n = 12) const { return LaurentSeries::monomial(z, c, k, n); }
};

const BasisLabel H = BasisLabel::cartan(0);
const BasisLabel E = BasisLabel::root(0);  // alpha
const BasisLabel F = BasisLabel::root(1);  // -alpha

TEST(Parahoric, OrdersAreMAlpha) {
  Sl2Half s;
  EXPECT_EQ(s.p.orders(), (std::vector<long long>{-1, 1}));
  EXPECT_EQ(s.p.lower_bound(H), 0);
}

TEST(Parahoric, ThetaZeroMeansNoPoles) {
  auto rs = sl(3);
  ParahoricAlgebra p(Coweight::zero(rs, 3));
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LaurentSeries> c;
    bool pole = false;
    for (int b = 0; b < rs->dim(); ++b) {
      c.push_back(testing::random_series(rng, Variable(VarTag::Z, 3), -1, 4, 8, 0.3));
      pole = pole || c.back().valuation_bound() < 0;
    }
    LieAlgebraElement x(rs, c);
    EXPECT_EQ(parahoric_membership(p, x).verdict, pole ? Verdict::False : Verdict::True);
  }
}

TEST(Parahoric, Sl2HalfExamples) {
  Sl2Half s;
  EXPECT_EQ(parahoric_membership(s.p, s.elem({{E, s.mono(Rational(1), -1)}})).verdict, Verdict::True);
  auto bad = parahoric_membership(s.p, s.elem({{F, s.mono(Rational(1), 0)}}));
  EXPECT_EQ(bad.verdict, Verdict::False);
  ASSERT_EQ(bad.offending.size(), 1u);
  EXPECT_EQ(bad.offending[0].label, F);
  EXPECT_EQ(bad.offending[0].exponent, 0);
}

TEST(Parahoric, CartanPoleNeverMember) {
  Rng rng(22);
  auto rs = sl(3);
  for (int trial = 0; trial < 20; ++trial) {
    ParahoricAlgebra p(testing::random_coweight(rng, rs, 4));
    auto x = LieAlgebraElement::zero(rs, Variable(VarTag::Z, 4), 6)
                 .with(BasisLabel::cartan(1), LaurentSeries::monomial(Variable(VarTag::Z, 4), Rational(1), -1, 6));
    EXPECT_EQ(parahoric_membership(p, x).verdict, Verdict::False);
  }
}

TEST(Parahoric, IndeterminateAboveTruncation) {
  auto rs = sl(2);
  // alpha(theta) = -4 puts the x_alpha bound at z^4.
  ParahoricAlgebra p(Coweight(rs, 1, {Rational(-2)}));
  auto x = LieAlgebraElement::zero(rs, Variable(VarTag::Z, 1), 2);
  auto m = parahoric_membership(p, x);
  EXPECT_EQ(m.verdict, Verdict::Indeterminate);
  EXPECT_FALSE(m.undetermined.empty());
}

TEST(Parahoric, RequiresZ) {
  Sl2Half s;
  auto x = LieAlgebraElement::zero(s.rs, Variable(VarTag::T, 2), 4);
  EXPECT_THROW(parahoric_membership(s.p, x), Error);
}

TEST(WeightPiece, Examples) {
  Sl2Half s;
  auto theta_elem = LieAlgebraElement::constant_cartan(s.theta, s.z, 12);
  EXPECT_TRUE(weight_piece_membership(s.p, theta_elem, Rational(0)));
  EXPECT_TRUE(weight_piece_membership(s.p, s.elem({{E, s.mono(Rational(1), -1)}}), Rational(0)));
  auto e1 = s.elem({{E, s.mono(Rational(1), 0)}});
  EXPECT_FALSE(weight_piece_membership(s.p, e1, Rational(0)));
  EXPECT_TRUE(weight_piece_membership(s.p, e1, Rational(1)));
}

TEST(WeightZero, Examples) {
  Sl2Half s;
  auto theta_elem = LieAlgebraElement::constant_cartan(s.theta, s.z, 12);
  auto x = theta_elem.with(H, s.mono(Rational(1, 2), 0) + s.mono(Rational(1), 1));
  EXPECT_EQ(weight_zero_projection(s.p, x), theta_elem);
  auto y = s.elem({{E, s.mono(Rational(1), -1) + s.mono(Rational(1), 0)}});
  EXPECT_EQ(weight_zero_projection(s.p, y), s.elem({{E, s.mono(Rational(1), -1)}}));
}

TEST(WeightZero, Idempotent) {
  Rng rng(23);
  for (int n : {2, 3}) {
    auto rs = sl(n);
    for (int trial = 0; trial < 50; ++trial) {
      ParahoricAlgebra p(testing::random_coweight(rng, rs, 2));
      auto x = testing::random_parahoric(rng, p, 10);
      auto once = weight_zero_projection(p, x);
      ASSERT_EQ(weight_zero_projection(p, once), once);
      ASSERT_TRUE(weight_piece_membership(p, once, Rational(0)));
    }
  }
}

TEST(WeightDecomposition, FiniteWindowAndWeights) {
  Sl2Half s;
  auto dec = weight_decomposition(s.p, 3);
  for (const auto& [lambda, terms] : dec) {
    EXPECT_GE(lambda, Rational(-3));
    EXPECT_LE(lambda, Rational(3));
    for (auto [l, i] : terms) EXPECT_EQ(s.p.term_weight(l, i), lambda);
  }
  // Weight 0: h, x_alpha z^-1, x_-alpha z^1.
  EXPECT_EQ(dec.at(Rational(0)).size(), 3u);
}

TEST(WeightDecomposition, ZeroPieceClosedUnderBracket) {
  Rng rng(24);
  auto rs = sl(3);
  for (int trial = 0; trial < 20; ++trial) {
    ParahoricAlgebra p(testing::random_coweight(rng, rs, 3));
    auto dec = weight_decomposition(p, 4);
    const auto& zero = dec.at(Rational(0));
    for (auto [la, ia] : zero)
      for (auto [lb, ib] : zero) {
        Variable z(VarTag::Z, 3);
        auto x = LieAlgebraElement::zero(rs, z, 12).with(la, LaurentSeries::monomial(z, Rational(1), ia, 12));
        auto y = LieAlgebraElement::zero(rs, z, 12).with(lb, LaurentSeries::monomial(z, Rational(1), ib, 12));
        ASSERT_TRUE(weight_piece_membership(p, bracket(x, y), Rational(0)));
      }
  }
}

TEST(ResidueCondition, ThetaZeroMeansHolomorphic) {
  auto rs = sl(2);
  ParahoricAlgebra p(Coweight::zero(rs, 1));
  Variable z(VarTag::Z, 1);
  auto x = LieAlgebraElement::zero(rs, z, 8).with(E, LaurentSeries::monomial(z, Rational(3), 1, 8));
  EXPECT_EQ(residue_condition_check(LogahoricConnection(p, x)).verdict(), Verdict::True);
  auto y = x.with(H, LaurentSeries::monomial(z, Rational(3), 0, 8));
  auto rep = residue_condition_check(LogahoricConnection(p, y));
  EXPECT_EQ(rep.verdict(), Verdict::False);
  EXPECT_TRUE(rep.agree());
}

TEST(ResidueCondition, Sl2HalfExamples) {
  Sl2Half s;
  auto theta_elem = LieAlgebraElement::constant_cartan(s.theta, s.z, 12);
  auto pass = theta_elem.with(F, s.mono(Rational(5), 2));
  auto fail = theta_elem.with(F, s.mono(Rational(5), 1));
  auto rp = residue_condition_check(LogahoricConnection(s.p, pass));
  auto rf = residue_condition_check(LogahoricConnection(s.p, fail));
  EXPECT_EQ(rp.verdict(), Verdict::True);
  EXPECT_EQ(rf.verdict(), Verdict::False);
  EXPECT_TRUE(rp.agree());
  EXPECT_TRUE(rf.agree());
  ASSERT_FALSE(rf.diagnostics.empty());
  EXPECT_EQ(rf.diagnostics[0].label, F);
  EXPECT_EQ(rf.diagnostics[0].exponent, 1);
}

TEST(ResidueCondition, ThetaAlwaysPasses) {
  Rng rng(25);
  for (int n : {2, 3, 4}) {
    auto rs = sl(n);
    for (int trial = 0; trial < 20; ++trial) {
      Coweight theta = testing::random_coweight(rng, rs, testing::uniform(rng, 1, 6));
      ParahoricAlgebra p(theta);
      auto x = LieAlgebraElement::constant_cartan(theta, Variable(VarTag::Z, theta.r()), 12);
      auto rep = residue_condition_check(LogahoricConnection(p, x));
      ASSERT_EQ(rep.verdict(), Verdict::True);
      ASSERT_TRUE(rep.agree());
    }
  }
}

TEST(LogahoricConnection, RejectsNonMembers) {
  Sl2Half s;
  try {
    LogahoricConnection(s.p, s.elem({{F, s.mono(Rational(1), 0)}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotParahoric);
  }
}

TEST(Parahoric, ClosedUnderBracket) {
  Rng rng(26);
  for (int n : {2, 3}) {
    auto rs = sl(n);
    for (int trial = 0; trial < 60; ++trial) {
      ParahoricAlgebra p(testing::random_coweight(rng, rs, testing::uniform(rng, 2, 4)));
      auto x = testing::random_parahoric(rng, p, 12, 3);
      auto y = testing::random_parahoric(rng, p, 12, 3);
      auto br = bracket(x, y);
      auto m = parahoric_membership(p, br);
      ASSERT_NE(m.verdict, Verdict::False);
    }
  }
}

TEST(Parahoric, DependsOnlyOnOrders) {
  // theta and theta' with the same m_alpha for every root.
  auto rs = sl(2);
  ParahoricAlgebra a(Coweight(rs, 4, {Rational(1, 4)}));   // alpha(theta) = 1/2
  ParahoricAlgebra b(Coweight(rs, 8, {Rational(3, 8)}));   // alpha(theta) = 3/4
  ASSERT_EQ(a.orders(), b.orders());
  Rng rng(27);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LaurentSeries> ca, cb;
    for (int k = 0; k < rs->dim(); ++k) {
      auto terms = testing::sparse_terms(rng, -2, 4, 1, 0, 0.3);
      ca.emplace_back(Variable(VarTag::Z, 4), terms, 8);
      cb.emplace_back(Variable(VarTag::Z, 8), terms, 8);
    }
    ASSERT_EQ(parahoric_membership(a, LieAlgebraElement(rs, ca)).verdict,
              parahoric_membership(b, LieAlgebraElement(rs, cb)).verdict);
  }
}

TEST(ResidueCondition, RoutesAgreeOnRandomMembers) {
  Rng rng(28);
  for (int n : {2, 3}) {
    auto rs = sl(n);
    for (int trial = 0; trial < 100; ++trial) {
      Coweight theta = testing::random_coweight(rng, rs, testing::uniform(rng, 2, 6));
      ParahoricAlgebra p(theta);
      auto x = testing::random_parahoric(rng, p, 12);
      if (testing::coin(rng)) {
        // Force the weight-zero part to theta so both verdicts occur.
        x = x - weight_zero_projection(p, x) + LieAlgebraElement::constant_cartan(theta, x.variable(), x.truncation());
      }
      auto rep = residue_condition_check(LogahoricConnection(p, x));
      ASSERT_TRUE(rep.agree()) << x.str();
    }
  }
}

}  // namespace
}  // namespace parlog
