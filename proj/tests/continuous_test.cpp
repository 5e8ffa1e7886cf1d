#include "guesswho/continuous.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace guesswho;

TEST(Decompose, Examples) {
  ContinuousRegion a = decompose(4.0, 2.0);
  EXPECT_EQ(a.kind, ContinuousKind::Weeds);
  EXPECT_EQ(a.level, 0);
  EXPECT_EQ(a.alpha, 4.0);
  EXPECT_EQ(a.beta, 2.0);

  ContinuousRegion b = decompose(8.0, 4.0);
  EXPECT_EQ(b.kind, ContinuousKind::Weeds);
  EXPECT_EQ(b.level, 1);
  EXPECT_EQ(b.alpha, 4.0);
  EXPECT_EQ(b.beta, 2.0);

  ContinuousRegion c = decompose(5.0, 4.0);
  EXPECT_EQ(c.kind, ContinuousKind::Weeds);
  EXPECT_EQ(c.level, 1);
  EXPECT_EQ(c.alpha, 2.5);
  EXPECT_EQ(c.beta, 2.0);

  ContinuousRegion d = decompose(3.0, 5.0);
  EXPECT_EQ(d.kind, ContinuousKind::UpperHand);
  EXPECT_EQ(d.level, 1);
  EXPECT_EQ(d.alpha, 1.5);
  EXPECT_EQ(d.beta, 2.5);
}

TEST(Decompose, RangesHold) {
  for (double x = 1.03; x < 300.0; x *= 1.17) {
    for (double y = 1.01; y < 300.0; y *= 1.13) {
      ContinuousRegion r = decompose(x, y);
      EXPECT_EQ(std::ldexp(r.alpha, r.level), x);
      EXPECT_EQ(std::ldexp(r.beta, r.level), y);
      if (r.kind == ContinuousKind::Weeds) {
        EXPECT_GT(r.alpha, 2.0);
        EXPECT_GT(r.beta, 1.0);
        EXPECT_LE(r.beta, 2.0);
      } else {
        EXPECT_GT(r.alpha, 1.0);
        EXPECT_LE(r.alpha, 2.0);
        EXPECT_GT(r.beta, 0.5);
      }
    }
  }
}

TEST(Decompose, RejectsOutsideDomain) {
  EXPECT_THROW(decompose(1.0, 3.0), GameError);
  EXPECT_THROW(decompose(3.0, 0.5), GameError);
  EXPECT_THROW(decompose_any(-1.0, 2.0), GameError);
  EXPECT_THROW(decompose_any(NAN, 2.0), GameError);
  EXPECT_NO_THROW(decompose_any(0.5, 0.25));
}

TEST(PInfinity, Examples) {
  EXPECT_NEAR(p_infinity(4.0, 2.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p_infinity(8.0, 4.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p_infinity(2.0, 2.0), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(p_infinity_exact(5, 4), Rational(8, 15));
  EXPECT_NEAR(p_infinity(5.0, 4.0), 8.0 / 15.0, 1e-15);
}

TEST(PInfinity, ScaleInvariant) {
  for (double x = 1.1; x < 20.0; x *= 1.3) {
    for (double y = 1.1; y < 20.0; y *= 1.3) {
      for (int k : {1, 5, 20}) EXPECT_NEAR(p_infinity(std::ldexp(x, k), std::ldexp(y, k)), p_infinity(x, y), 1e-14);
    }
  }
}

TEST(PInfinity, ContinuousAcrossRegionBoundaries) {
  for (double t = 1.01; t < 2.0; t += 0.01) {
    // alpha = 2 with beta = t: weeds on one side, upper hand on the other.
    EXPECT_NEAR(p_infinity(2.0 * t + 1e-13, t), p_infinity(2.0 * t, t), 1e-12);
    // beta = 2 with alpha in (2, 4]: y crosses a power of two inside the weeds.
    EXPECT_NEAR(p_infinity(2.0 * t + 2.0, 2.0 + 1e-13), p_infinity(2.0 * t + 2.0, 2.0), 1e-12);
    // Level change along the upper hand: x crosses a power of two.
    EXPECT_NEAR(p_infinity(4.0 + 1e-12, 3.0 * t), p_infinity(4.0, 3.0 * t), 1e-12);
  }
}

TEST(PInfinity, WithinUnitInterval) {
  for (double x = 1.01; x < 100.0; x *= 1.07)
    for (double y = 1.01; y < 100.0; y *= 1.07) {
      double p = p_infinity(x, y);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
}

TEST(PInfinity, ExactMatchesDouble) {
  for (Count n = 2; n <= 60; ++n)
    for (Count m = 2; m <= 60; ++m)
      EXPECT_NEAR(p_infinity_exact(n, m).to_double(), p_infinity(static_cast<double>(n), static_cast<double>(m)), 1e-14);
}

TEST(EscapeProbability, Examples) {
  EXPECT_DOUBLE_EQ(escape_probability(4.0), 0.5);
  EXPECT_DOUBLE_EQ(escape_probability(8.0 / 3.0), 0.75);
  EXPECT_THROW(escape_probability(2.0), GameError);
}

// A failed bold bid maps alpha to 2(alpha - 1); escape then has probability
// 1/alpha + (1 - 1/alpha) * escape(2(alpha - 1)).
TEST(EscapeProbability, SatisfiesFailureRecursion) {
  for (double a = 2.01; a < 40.0; a += 0.37) {
    double rhs = 1.0 / a + (1.0 - 1.0 / a) * escape_probability(2.0 * (a - 1.0));
    EXPECT_NEAR(escape_probability(a), rhs, 1e-14);
  }
}

TEST(CorrectionIdentity, Examples) {
  EXPECT_EQ(correction_identity(7, 4).difference, Rational(-1, 42));
  EXPECT_EQ(correction_identity(5, 5).difference, Rational(4, 75));
  EXPECT_EQ(correction_identity(4, 2).difference, Rational(-1, 12));
  EXPECT_EQ(expected_correction(5, 5), Rational(4, 75));
  EXPECT_THROW(correction_identity(1, 5), GameError);
}

TEST(CorrectionIdentity, HoldsOverRange) {
  for (Count n = 2; n <= 126; ++n)
    for (Count m = 2; n + m <= 128; ++m) ASSERT_TRUE(correction_identity(n, m).holds()) << n << "," << m;
  EXPECT_TRUE(correction_identity((Count{1} << 50) + 3, (Count{1} << 48) + 5).holds());
}

TEST(EqualPoolAdvantage, RangeAndMinimum) {
  EXPECT_NEAR(equal_pool_advantage(2.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(equal_pool_advantage(4.0 / 3.0), 5.0 / 8.0, 1e-15);
  EXPECT_NEAR(equal_pool_advantage(1.0 + 1e-12), 2.0 / 3.0, 1e-11);
  for (double a = 1.001; a <= 2.0; a += 0.001) {
    double v = equal_pool_advantage(a);
    EXPECT_GE(v, 5.0 / 8.0 - 1e-12);
    EXPECT_LE(v, 2.0 / 3.0 + 1e-12);
    EXPECT_NEAR(v, p_infinity(a, a), 1e-14);
  }
  EXPECT_THROW(equal_pool_advantage(1.0), GameError);
  EXPECT_THROW(equal_pool_advantage(2.5), GameError);
}

TEST(FairFactor, MatchesAnalyticRoot) {
  for (double b = 1.001; b <= 2.0; b += 0.001) {
    FairnessResult r = fair_factor(b);
    EXPECT_NEAR(r.fair_factor, oracle::fair_factor(b), 1e-10) << b;
    EXPECT_NEAR(p_infinity(r.fair_factor * b, b), 0.5, 1e-10);
    EXPECT_GE(r.fair_factor, 4.0 / 3.0 - 1e-9);
    EXPECT_LE(r.fair_factor, 1.5 + 1e-9);
  }
  EXPECT_NEAR(fair_factor(2.0).fair_factor, 4.0 / 3.0, 1e-10);
  EXPECT_NEAR(fair_factor(4.0 / 3.0).fair_factor, 1.5, 1e-10);
  EXPECT_THROW(fair_factor(1.0), GameError);
}
