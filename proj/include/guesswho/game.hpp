#pragma once

#include "guesswho/rational.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace guesswho {

using Count = std::int64_t;

class GameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Player { One, Two };

inline Player other(Player p) { return p == Player::One ? Player::Two : Player::One; }

inline std::string_view to_string(Player p) { return p == Player::One ? "P1" : "P2"; }

// Pools are stored from the perspective of the player to move: `my_pool` is
// the mover's candidate pool, `opp_pool` the opponent's.
struct GameState {
  Count my_pool = 2;
  Count opp_pool = 2;
  Player to_move = Player::One;

  bool terminal() const { return my_pool == 1 || opp_pool == 1; }
  friend bool operator==(const GameState&, const GameState&) = default;
};

inline void check_pools(Count n, Count m) {
  if (n < 1 || m < 1) throw GameError("pool sizes must be >= 1");
  if (n == 1 && m == 1) throw GameError("state (1,1) is undefined");
}

inline GameState make_state(Count my_pool, Count opp_pool, Player to_move = Player::One) {
  check_pools(my_pool, opp_pool);
  return {my_pool, opp_pool, to_move};
}

enum class RegionKind { Weeds, UpperHand, TerminalWin, TerminalLoss };

inline std::string_view to_string(RegionKind k) {
  switch (k) {
    case RegionKind::Weeds: return "weeds";
    case RegionKind::UpperHand: return "upper-hand";
    case RegionKind::TerminalWin: return "terminal-win";
    case RegionKind::TerminalLoss: return "terminal-loss";
  }
  return "?";
}

struct Region {
  RegionKind kind = RegionKind::TerminalWin;
  std::optional<int> level;

  bool terminal() const {
    return kind == RegionKind::TerminalWin || kind == RegionKind::TerminalLoss;
  }
  friend bool operator==(const Region&, const Region&) = default;
};

// A bid of size b asks a question whose "yes" set holds b of the mover's n
// candidates.
class BidSize {
 public:
  BidSize(Count value, Count pool) : value_(value) {
    if (pool < 2) throw GameError("no bid is possible from a pool of size 1");
    if (value < 1 || value > pool - 1) {
      throw GameError("bid " + std::to_string(value) + " outside [1, " +
                      std::to_string(pool - 1) + "]");
    }
  }

  Count value() const { return value_; }
  operator Count() const { return value_; }  // NOLINT

 private:
  Count value_;
};

// floor(log2(v)) for v >= 1, via bit length.
inline int floor_log2(Count v) {
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(v))) - 1;
}

// Region of the mover holding n candidates against an opponent holding m.
//   Weeds(k):     2^{k+1} < n  and 2^k < m <= 2^{k+1}
//   UpperHand(k): 2^k < n <= 2^{k+1} and 2^k < m
inline Region classify(Count n, Count m) {
  check_pools(n, m);
  if (n == 1) return {RegionKind::TerminalWin, std::nullopt};
  if (m == 1) return {RegionKind::TerminalLoss, std::nullopt};
  int k = floor_log2(m - 1);
  if (floor_log2(n - 1) > k) return {RegionKind::Weeds, k};
  return {RegionKind::UpperHand, floor_log2(n - 1)};
}

// Exact optimal win probability for the mover from (n, m).
inline Rational closed_form_value(Count n, Count m) {
  Region r = classify(n, m);
  if (r.kind == RegionKind::TerminalWin) return Rational(1);
  if (r.kind == RegionKind::TerminalLoss) return Rational(0);
  unsigned k = static_cast<unsigned>(*r.level);
  Rational nm = Rational(n) * Rational(m);
  if (r.kind == RegionKind::Weeds) {
    return Rational::pow2(k + 1) / Rational(n) -
           Rational(2, 3) * (Rational::pow2(2 * k + 1) + Rational(1)) / nm;
  }
  return Rational(1) - Rational::pow2(k) / Rational(m) +
         Rational(2, 3) * (Rational::pow2(2 * k) + Rational(2)) / nm;
}

// Bold bid 2^k in the weeds, half the pool with the upper hand. This is the
// smallest member of the maximizer set.
inline BidSize optimal_bid(Count n, Count m) {
  Region r = classify(n, m);
  if (r.terminal()) throw GameError("no bid at a terminal state");
  if (r.kind == RegionKind::Weeds) return BidSize(Count{1} << *r.level, n);
  return BidSize(n / 2, n);
}

// Win probability for the mover bidding b at (n, m) when the continuation is
// valued by `value(mover_pool, opponent_pool)`.
template <typename ValueFn>
Rational bid_value(Count n, Count m, Count b, ValueFn&& value) {
  check_pools(n, m);
  BidSize bid(b, n);
  return Rational(1) - Rational(bid, n) * value(m, Count{bid}) -
         Rational(n - bid, n) * value(m, n - bid);
}

inline Rational bid_value(Count n, Count m, Count b) {
  return bid_value(n, m, b, [](Count a, Count c) { return closed_form_value(a, c); });
}

// Player One's win probability at a state given the mover-normalized value.
inline Rational player_one_value(const GameState& s, const Rational& mover_value) {
  return s.to_move == Player::One ? mover_value : Rational(1) - mover_value;
}

}  // namespace guesswho
