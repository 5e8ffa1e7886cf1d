#pragma once

#include "guesswho/game.hpp"
#include "guesswho/strategy.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace guesswho {

// Exact win probability of Player One when both players follow fixed
// (possibly mixed) positional strategies, for every start with n + m <= max_sum.
//
// Two tables are filled in increasing n + m: `first_` holds positions with
// Player One to move, `second_` positions with Player Two to move. Pools are
// indexed as (Player One's pool, Player Two's pool).
class PolicyValues {
 public:
  PolicyValues(Count max_sum, const Strategy& p1, const Strategy& p2)
      : max_sum_(max_sum), side_(static_cast<std::size_t>(max_sum)) {
    if (max_sum < 3) throw GameError("max_sum must be >= 3");
    first_.resize(side_ * side_);
    second_.resize(side_ * side_);
    for (Count s = 3; s <= max_sum; ++s) {
      for (Count x = 1; x < s; ++x) {
        Count y = s - x;
        first_[at(x, y)] = p1_to_move(x, y, p1);
        second_[at(x, y)] = p2_to_move(x, y, p2);
      }
    }
  }

  Count max_sum() const { return max_sum_; }

  // Player One to move holding n against m.
  const Rational& value(Count n, Count m) const {
    check_pools(n, m);
    if (n + m > max_sum_) throw GameError("state outside evaluated range");
    return *first_[at(n, m)];
  }

 private:
  std::size_t at(Count x, Count y) const {
    return static_cast<std::size_t>(x) * side_ + static_cast<std::size_t>(y);
  }

  Rational p1_to_move(Count x, Count y, const Strategy& p1) const {
    if (x == 1) return Rational(1);
    if (y == 1) return Rational(0);
    Rational total(0);
    for (const auto& [b, w] : p1.mix(x, y)) {
      BidSize bid(b, x);
      total += w * (Rational(bid, x) * *second_[at(bid, y)] +
                    Rational(x - bid, x) * *second_[at(x - bid, y)]);
    }
    return total;
  }

  Rational p2_to_move(Count x, Count y, const Strategy& p2) const {
    if (x == 1) return Rational(1);
    if (y == 1) return Rational(0);
    Rational total(0);
    for (const auto& [c, w] : p2.mix(y, x)) {
      BidSize bid(c, y);
      total += w * (Rational(bid, y) * *first_[at(x, bid)] +
                    Rational(y - bid, y) * *first_[at(x, y - bid)]);
    }
    return total;
  }

  Count max_sum_;
  std::size_t side_;
  std::vector<std::optional<Rational>> first_;
  std::vector<std::optional<Rational>> second_;
};

inline Rational evaluate_policy(Count n, Count m, const Strategy& p1,
                                const Strategy& p2 = strategies::optimal()) {
  check_pools(n, m);
  return PolicyValues(std::max<Count>(n + m, 3), p1, p2).value(n, m);
}

}  // namespace guesswho
