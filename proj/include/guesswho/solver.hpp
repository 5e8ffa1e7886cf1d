#pragma once

#include "guesswho/game.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace guesswho {

// Optimal values and full maximizer sets for every state with n + m <= max_sum,
// filled stage by stage in increasing s = n + m. Immutable once built.
class SolveTable {
 public:
  explicit SolveTable(Count max_sum)
      : max_sum_(max_sum),
        side_(static_cast<std::size_t>(max_sum)),
        values_(side_ * side_),
        bids_(side_ * side_) {}

  Count max_sum() const { return max_sum_; }

  bool contains(Count n, Count m) const {
    return n >= 1 && m >= 1 && !(n == 1 && m == 1) && n + m <= max_sum_;
  }

  const Rational& value(Count n, Count m) const {
    const auto& v = values_[index(n, m)];
    if (!v) throw GameError("state not in table");
    return *v;
  }

  // Every bid attaining the maximum, ascending. Empty for terminal states.
  const std::vector<Count>& bids(Count n, Count m) const { return bids_[index(n, m)]; }

  Count best_bid(Count n, Count m) const {
    const auto& b = bids(n, m);
    if (b.empty()) throw GameError("no bid at a terminal state");
    return b.front();
  }

  template <typename Fn>
  void for_each_state(Fn&& fn) const {
    for (Count s = 3; s <= max_sum_; ++s)
      for (Count n = 1; n < s; ++n) fn(n, s - n);
  }

 private:
  friend SolveTable solve_dp(Count);

  std::size_t index(Count n, Count m) const {
    if (!contains(n, m)) {
      throw GameError("state (" + std::to_string(n) + "," + std::to_string(m) +
                      ") outside table with max_sum " + std::to_string(max_sum_));
    }
    return static_cast<std::size_t>(n) * side_ + static_cast<std::size_t>(m);
  }

  Count max_sum_;
  std::size_t side_;
  std::vector<std::optional<Rational>> values_;
  std::vector<std::vector<Count>> bids_;
};

inline SolveTable solve_dp(Count max_sum) {
  if (max_sum < 3) throw GameError("max_sum must be >= 3");
  SolveTable t(max_sum);
  for (Count k = 2; k < max_sum; ++k) {
    t.values_[t.index(1, k)] = Rational(1);
    t.values_[t.index(k, 1)] = Rational(0);
  }
  auto lookup = [&t](Count a, Count c) -> const Rational& { return t.value(a, c); };
  for (Count s = 4; s <= max_sum; ++s) {
    for (Count n = 2; n <= s - 2; ++n) {
      Count m = s - n;
      std::optional<Rational> best;
      std::vector<Count> argmax;
      for (Count b = 1; b <= n - 1; ++b) {
        Rational v = bid_value(n, m, b, lookup);
        if (!best || v > *best) {
          best = v;
          argmax.assign(1, b);
        } else if (v == *best) {
          argmax.push_back(b);
        }
      }
      t.values_[t.index(n, m)] = std::move(best);
      t.bids_[t.index(n, m)] = std::move(argmax);
    }
  }
  return t;
}

struct Violation {
  std::string kind;
  Count n = 0;
  Count m = 0;
  std::string detail;
};

inline void to_json(nlohmann::json& j, const Violation& v) {
  j = {{"kind", v.kind}, {"n", v.n}, {"m", v.m}, {"detail", v.detail}};
}

// Exact agreement of the table with the closed form, and membership of the
// closed-form bid in every maximizer set.
inline std::vector<Violation> verify_closed_form(const SolveTable& t) {
  std::vector<Violation> out;
  t.for_each_state([&](Count n, Count m) {
    Rational q = closed_form_value(n, m);
    const Rational& p = t.value(n, m);
    if (p != q) out.push_back({"value", n, m, "dp=" + p.str() + " closed_form=" + q.str()});
    if (n == 1 || m == 1) return;
    Count b = optimal_bid(n, m);
    const auto& set = t.bids(n, m);
    if (std::find(set.begin(), set.end(), b) == set.end()) {
      out.push_back({"bid", n, m, "bid " + std::to_string(b) + " not a maximizer"});
    }
  });
  return out;
}

inline std::vector<Violation> verify_closed_form(Count max_sum) {
  return verify_closed_form(solve_dp(max_sum));
}

// In the weeds at level k, any bid whose two outcomes both hand the opponent
// the upper hand at level k falls short of the optimum by exactly 2/(nm).
inline std::vector<Violation> verify_weeds_deficit(const SolveTable& t, std::size_t* checked = nullptr) {
  std::vector<Violation> out;
  std::size_t count = 0;
  auto lookup = [&t](Count a, Count c) -> const Rational& { return t.value(a, c); };
  t.for_each_state([&](Count n, Count m) {
    if (n == 1 || m == 1) return;
    Region r = classify(n, m);
    if (r.kind != RegionKind::Weeds) return;
    Region target{RegionKind::UpperHand, r.level};
    for (Count b = 1; b <= n - 1; ++b) {
      if (classify(m, b) != target || classify(m, n - b) != target) continue;
      ++count;
      Rational deficit = t.value(n, m) - bid_value(n, m, b, lookup);
      if (deficit != Rational(2) / (Rational(n) * Rational(m))) {
        out.push_back({"weeds-deficit", n, m, "bid " + std::to_string(b) + " deficit " + deficit.str()});
      }
    }
  });
  if (checked) *checked = count;
  return out;
}

inline std::string bids_field(const std::vector<Count>& bids) {
  std::string s;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (i) s += '|';
    s += std::to_string(bids[i]);
  }
  return s;
}

// CSV: n,m,p_num,p_den,bids with bids '|'-separated (empty when terminal).
inline void write_table_csv(std::ostream& os, const SolveTable& t) {
  os << "n,m,p_num,p_den,bids\n";
  t.for_each_state([&](Count n, Count m) {
    const Rational& p = t.value(n, m);
    os << n << ',' << m << ',' << p.num_str() << ',' << p.den_str() << ',' << bids_field(t.bids(n, m))
       << '\n';
  });
}

inline nlohmann::json table_to_json(const SolveTable& t) {
  nlohmann::json states = nlohmann::json::array();
  t.for_each_state([&](Count n, Count m) {
    const Rational& p = t.value(n, m);
    states.push_back({{"n", n},
                      {"m", m},
                      {"p_num", p.num64()},
                      {"p_den", p.den64()},
                      {"bids", t.bids(n, m)}});
  });
  return {{"max_sum", t.max_sum()}, {"states", std::move(states)}};
}

}  // namespace guesswho
