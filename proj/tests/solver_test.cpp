#include "guesswho/continuous.hpp"
#include "guesswho/solver.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

using namespace guesswho;

TEST(SolveDp, SmallTables) {
  SolveTable t = solve_dp(5);
  EXPECT_EQ(t.value(3, 2), Rational(1, 3));
  EXPECT_EQ(t.value(2, 3), Rational(1));
  EXPECT_EQ(t.bids(3, 2), (std::vector<Count>{1, 2}));
  EXPECT_EQ(t.best_bid(3, 2), 1);
  for (Count m = 2; m <= 4; ++m) EXPECT_EQ(t.value(1, m), Rational(1));
  for (Count n = 2; n <= 4; ++n) EXPECT_EQ(t.value(n, 1), Rational(0));
  EXPECT_TRUE(t.bids(1, 4).empty());
  EXPECT_FALSE(t.contains(1, 1));
  EXPECT_FALSE(t.contains(3, 3));
  EXPECT_THROW(t.value(3, 3), GameError);
}

TEST(SolveDp, ElevenContainsSevenFour) {
  SolveTable t = solve_dp(11);
  EXPECT_EQ(t.value(7, 4), Rational(5, 14));
  const auto& bids = t.bids(7, 4);
  EXPECT_NE(std::find(bids.begin(), bids.end(), 2), bids.end());
}

TEST(SolveDp, RejectsTinyRange) { EXPECT_THROW(solve_dp(2), GameError); }

TEST(SolveDp, MatchesExplicitGameTree) {
  oracle::GameTree tree;
  SolveTable t = solve_dp(30);
  t.for_each_state([&](Count n, Count m) {
    oracle::Q v = tree.value(static_cast<int>(n), static_cast<int>(m), 1);
    const Rational& p = t.value(n, m);
    ASSERT_EQ(p.numerator(), boost::multiprecision::numerator(v)) << n << "," << m;
    ASSERT_EQ(p.denominator(), boost::multiprecision::denominator(v)) << n << "," << m;
  });
}

TEST(SolveDp, InvariantsUpTo128) {
  SolveTable t = solve_dp(128);
  t.for_each_state([&](Count n, Count m) {
    const Rational& p = t.value(n, m);
    ASSERT_GE(p, Rational(0));
    ASSERT_LE(p, Rational(1));
    if (n == 2 && m >= 2) ASSERT_EQ(p, Rational(1));
    if (n == 1 || m == 1) return;
    // Every bid is bounded by the optimum; the maximizer set is exactly the bids that attain it.
    auto lookup = [&t](Count a, Count c) -> const Rational& { return t.value(a, c); };
    const auto& set = t.bids(n, m);
    for (Count b = 1; b < n; ++b) {
      Rational v = bid_value(n, m, b, lookup);
      ASSERT_LE(v, p);
      bool in_set = std::find(set.begin(), set.end(), b) != set.end();
      ASSERT_EQ(in_set, v == p) << n << "," << m << " b=" << b;
    }
    ASSERT_TRUE(std::is_sorted(set.begin(), set.end()));
  });
}

TEST(SolveDp, EmpiricalMonotonicity) {
  SolveTable t = solve_dp(128);
  for (Count n = 1; n <= 64; ++n) {
    for (Count m = 1; m <= 64; ++m) {
      if (n == 1 && m == 1) continue;
      if (n + 1 <= 64) EXPECT_GE(t.value(n, m), t.value(n + 1, m)) << n << "," << m;
      if (m + 1 <= 64) EXPECT_LE(t.value(n, m), t.value(n, m + 1)) << n << "," << m;
    }
  }
}

TEST(VerifyClosedForm, NoViolations) {
  EXPECT_TRUE(verify_closed_form(3).empty());
  EXPECT_TRUE(verify_closed_form(64).empty());
  EXPECT_TRUE(verify_closed_form(128).empty());
}

TEST(VerifyWeedsDeficit, HoldsAndIsExercised) {
  SolveTable t = solve_dp(64);
  std::size_t checked = 0;
  EXPECT_TRUE(verify_weeds_deficit(t, &checked).empty());
  EXPECT_GT(checked, 100u);
}

TEST(CorrectionIdentity, AgainstDpTable) {
  SolveTable t = solve_dp(128);
  t.for_each_state([&](Count n, Count m) {
    if (n < 2 || m < 2) return;
    CorrectionTerm c = correction_identity(n, m, t.value(n, m));
    ASSERT_TRUE(c.holds()) << n << "," << m << ": " << c.difference << " vs " << c.expected;
  });
}

TEST(TableExport, CsvFormat) {
  std::ostringstream os;
  write_table_csv(os, solve_dp(5));
  EXPECT_EQ(os.str(),
            "n,m,p_num,p_den,bids\n"
            "1,2,1,1,\n"
            "2,1,0,1,\n"
            "1,3,1,1,\n"
            "2,2,1,1,1\n"
            "3,1,0,1,\n"
            "1,4,1,1,\n"
            "2,3,1,1,1\n"
            "3,2,1,3,1|2\n"
            "4,1,0,1,\n");
}

TEST(TableExport, JsonMatchesCsv) {
  SolveTable t = solve_dp(12);
  nlohmann::json j = table_to_json(t);
  EXPECT_EQ(j["max_sum"], 12);
  std::size_t count = 0;
  for (const auto& s : j["states"]) {
    Count n = s["n"], m = s["m"];
    EXPECT_EQ(Rational(s["p_num"].get<std::int64_t>(), s["p_den"].get<std::int64_t>()), t.value(n, m));
    EXPECT_EQ(s["bids"].get<std::vector<Count>>(), t.bids(n, m));
    ++count;
  }
  // Stages 3..12 hold s - 1 states each.
  EXPECT_EQ(count, 65u);
}
