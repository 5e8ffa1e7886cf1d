#pragma once

#include "guesswho/game.hpp"
#include "guesswho/rng.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace guesswho {

class StrategyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bidding rule for the mover holding n candidates against an opponent with m.
//
// `pick` plays one move, drawing randomness only from the supplied stream.
// `mix` gives the exact distribution over bids for policy evaluation; a
// deterministic rule yields a single entry with weight 1.
struct Strategy {
  using Mix = std::vector<std::pair<Count, Rational>>;

  std::string name;
  std::function<Count(Count n, Count m, SplitMix64& rng)> pick;
  std::function<Mix(Count n, Count m)> mix;
  bool deterministic = true;

  Count bid(Count n, Count m, SplitMix64& rng) const {
    Count b = pick(n, m, rng);
    if (b < 1 || b > n - 1) {
      throw StrategyError("strategy '" + name + "' bid " + std::to_string(b) + " from pool " +
                          std::to_string(n) + " (opponent " + std::to_string(m) + ")");
    }
    return b;
  }
};

template <typename Rule>
Strategy make_deterministic(std::string name, Rule rule) {
  Strategy s;
  s.name = std::move(name);
  s.pick = [rule](Count n, Count m, SplitMix64&) { return rule(n, m); };
  s.mix = [rule](Count n, Count m) { return Strategy::Mix{{rule(n, m), Rational(1)}}; };
  return s;
}

namespace strategies {

inline Strategy optimal() {
  return make_deterministic("optimal", [](Count n, Count m) { return optimal_bid(n, m).value(); });
}

inline Strategy halving() {
  return make_deterministic("halving", [](Count n, Count) { return n / 2; });
}

// Bold bid 2^floor(log2(m-1)) everywhere, capped to stay a legal bid.
inline Strategy bold() {
  return make_deterministic("bold", [](Count n, Count m) {
    Count b = Count{1} << floor_log2(m - 1);
    return b < n - 1 ? b : n - 1;
  });
}

inline Strategy always_one() {
  return make_deterministic("always-one", [](Count, Count) { return Count{1}; });
}

inline Strategy uniform_random() {
  Strategy s;
  s.name = "uniform-random";
  s.deterministic = false;
  s.pick = [](Count n, Count, SplitMix64& rng) {
    return static_cast<Count>(rng.below(static_cast<std::uint64_t>(n - 1))) + 1;
  };
  s.mix = [](Count n, Count) {
    Strategy::Mix out;
    Rational w(1, n - 1);
    for (Count b = 1; b <= n - 1; ++b) out.emplace_back(b, w);
    return out;
  };
  return s;
}

inline std::vector<std::string> names() {
  return {"optimal", "halving", "bold", "always-one", "uniform-random"};
}

inline Strategy by_name(const std::string& name) {
  if (name == "optimal") return optimal();
  if (name == "halving") return halving();
  if (name == "bold") return bold();
  if (name == "always-one") return always_one();
  if (name == "uniform-random") return uniform_random();
  throw GameError("unknown strategy '" + name + "'");
}

}  // namespace strategies
}  // namespace guesswho
