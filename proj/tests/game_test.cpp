#include "guesswho/game.hpp"
#include "guesswho/solver.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace guesswho;

TEST(Classify, Examples) {
  EXPECT_EQ(classify(7, 4), (Region{RegionKind::Weeds, 1}));
  EXPECT_EQ(classify(1, 9), (Region{RegionKind::TerminalWin, std::nullopt}));
  EXPECT_EQ(classify(9, 1), (Region{RegionKind::TerminalLoss, std::nullopt}));
  EXPECT_EQ(classify(5, 5), (Region{RegionKind::UpperHand, 2}));
  EXPECT_EQ(classify(2, 2), (Region{RegionKind::UpperHand, 0}));
  EXPECT_EQ(classify(3, 2), (Region{RegionKind::Weeds, 0}));
}

TEST(Classify, BoundaryStates) {
  // n = 2^{k+1} is still upper hand; one more candidate puts the mover in the weeds.
  EXPECT_EQ(classify(8, 5), (Region{RegionKind::UpperHand, 2}));
  EXPECT_EQ(classify(9, 5), (Region{RegionKind::Weeds, 2}));
  EXPECT_EQ(classify(9, 4), (Region{RegionKind::Weeds, 1}));
  EXPECT_EQ(classify(Count{1} << 40, (Count{1} << 39) + 1), (Region{RegionKind::UpperHand, 39}));
  EXPECT_EQ(classify((Count{1} << 40) + 1, (Count{1} << 39) + 1), (Region{RegionKind::Weeds, 39}));
}

TEST(Classify, RejectsInvalid) {
  EXPECT_THROW(classify(1, 1), GameError);
  EXPECT_THROW(classify(0, 3), GameError);
  EXPECT_THROW(classify(3, -1), GameError);
}

TEST(Classify, PartitionProperty) {
  for (Count n = 2; n <= 4096; n += (n < 300 ? 1 : 7)) {
    for (Count m = 2; m <= 4096; m += (m < 300 ? 1 : 11)) {
      int hits = 0;
      Region expect;
      for (int k = 0; k < 13; ++k) {
        if (oracle::in_weeds(n, m, k)) {
          ++hits;
          expect = {RegionKind::Weeds, k};
        }
        if (oracle::in_upper_hand(n, m, k)) {
          ++hits;
          expect = {RegionKind::UpperHand, k};
        }
      }
      ASSERT_EQ(hits, 1) << n << "," << m;
      ASSERT_EQ(classify(n, m), expect) << n << "," << m;
    }
  }
}

TEST(ClosedForm, Examples) {
  EXPECT_EQ(closed_form_value(3, 2), Rational(1, 3));
  EXPECT_EQ(closed_form_value(2, 2), Rational(1));
  EXPECT_EQ(closed_form_value(7, 4), Rational(5, 14));
  EXPECT_EQ(closed_form_value(5, 5), Rational(17, 25));
  EXPECT_EQ(closed_form_value(16, 16), Rational(43, 64));
  EXPECT_EQ(closed_form_value(9, 9), Rational(53, 81));
  EXPECT_EQ(closed_form_value(1, 9), Rational(1));
  EXPECT_EQ(closed_form_value(9, 1), Rational(0));
  EXPECT_THROW(closed_form_value(1, 1), GameError);
}

TEST(ClosedForm, HugePoolsStayExact) {
  Count n = (Count{1} << 62) + 1;
  Count m = (Count{1} << 61) + 1;
  Rational q = closed_form_value(n, m);
  EXPECT_GT(q, Rational(0));
  EXPECT_LT(q, Rational(1));
}

TEST(ClosedForm, MatchesBruteForceGameTree) {
  oracle::GameTree tree;
  for (int n = 1; n <= 18; ++n) {
    for (int m = 1; m <= 18; ++m) {
      if (n == 1 && m == 1) continue;
      Rational q = closed_form_value(n, m);
      oracle::Q v = tree.value(n, m, 1);
      EXPECT_EQ(q.numerator(), boost::multiprecision::numerator(v)) << n << "," << m;
      EXPECT_EQ(q.denominator(), boost::multiprecision::denominator(v)) << n << "," << m;
    }
  }
}

TEST(OptimalBid, Examples) {
  EXPECT_EQ(optimal_bid(7, 4).value(), 2);
  EXPECT_EQ(optimal_bid(9, 9).value(), 4);
  EXPECT_EQ(optimal_bid(3, 2).value(), 1);
  EXPECT_EQ(optimal_bid(24, 24).value(), 12);
  EXPECT_THROW(optimal_bid(1, 5), GameError);
  EXPECT_THROW(optimal_bid(5, 1), GameError);
}

TEST(OptimalBid, WeedsBidIsBelowHalf) {
  for (Count n = 3; n <= 200; ++n) {
    for (Count m = 2; m <= 200; ++m) {
      if (classify(n, m).kind == RegionKind::Weeds) EXPECT_LT(2 * optimal_bid(n, m).value(), n);
    }
  }
}

TEST(BidValue, Examples) {
  EXPECT_EQ(bid_value(7, 4, 2), Rational(5, 14));
  EXPECT_EQ(bid_value(7, 4, 3), Rational(2, 7));
  EXPECT_EQ(closed_form_value(7, 4) - bid_value(7, 4, 3), Rational(2, 28));
  for (Count m = 2; m <= 40; ++m) EXPECT_EQ(bid_value(2, m, 1), Rational(1));
}

TEST(BidValue, RejectsIllegalBids) {
  EXPECT_THROW(bid_value(7, 4, 0), GameError);
  EXPECT_THROW(bid_value(7, 4, 7), GameError);
  EXPECT_THROW(BidSize(1, 1), GameError);
}

TEST(BidValue, SymmetricInComplement) {
  for (Count n = 2; n <= 40; ++n)
    for (Count m = 2; m <= 40; ++m)
      for (Count b = 1; b < n; ++b) ASSERT_EQ(bid_value(n, m, b), bid_value(n, m, n - b));
}

TEST(GameState, Normalization) {
  EXPECT_THROW(make_state(1, 1), GameError);
  GameState s = make_state(4, 7, Player::Two);
  EXPECT_FALSE(s.terminal());
  // Player One's chance when Player Two moves holding 4 against 7.
  EXPECT_EQ(player_one_value(s, closed_form_value(4, 7)), Rational(1) - closed_form_value(4, 7));
  EXPECT_TRUE(make_state(1, 3).terminal());
}
