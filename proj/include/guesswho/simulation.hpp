#pragma once

#include "guesswho/continuous.hpp"
#include "guesswho/game.hpp"
#include "guesswho/rng.hpp"
#include "guesswho/strategy.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

namespace guesswho {

struct TrialResult {
  Player winner = Player::One;
  int rounds = 0;
  std::vector<GameState> trajectory;
};

struct EstimateReport {
  std::uint64_t trials = 0;
  std::uint64_t wins = 0;
  double p_hat = 0.0;
  double std_err = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t undecided = 0;

  static EstimateReport from_counts(std::uint64_t trials, std::uint64_t wins, std::uint64_t seed,
                                    std::uint64_t undecided = 0) {
    EstimateReport r{trials, wins, 0.0, 0.0, seed, undecided};
    if (trials > 0) {
      r.p_hat = static_cast<double>(wins) / static_cast<double>(trials);
      r.std_err = std::sqrt(r.p_hat * (1.0 - r.p_hat) / static_cast<double>(trials));
    }
    return r;
  }

  double undecided_fraction() const {
    return trials ? static_cast<double>(undecided) / static_cast<double>(trials) : 0.0;
  }

  // |p_hat - p| in units of the standard error; a zero standard error only
  // accepts an exact match.
  bool within_sigmas(double p, double sigmas) const {
    double gap = std::abs(p_hat - p);
    if (std_err == 0.0) return gap <= 1e-15;
    return gap <= sigmas * std_err;
  }
};

// Plays one game from Player One to move holding n against Player Two's m.
inline TrialResult play_discrete(Count n, Count m, const Strategy& p1, const Strategy& p2,
                                 SplitMix64& rng, bool record = false) {
  if (n < 2 || m < 2) throw GameError("simulation needs a non-terminal start");
  Count pools[2] = {n, m};
  int mover = 0;
  TrialResult result;
  const Strategy* plays[2] = {&p1, &p2};
  while (true) {
    Count& mine = pools[mover];
    Count theirs = pools[1 - mover];
    if (record) result.trajectory.push_back({mine, theirs, mover == 0 ? Player::One : Player::Two});
    Count b = plays[mover]->bid(mine, theirs, rng);
    bool yes = rng.below(static_cast<std::uint64_t>(mine)) < static_cast<std::uint64_t>(b);
    mine = yes ? b : mine - b;
    ++result.rounds;
    if (result.rounds > n + m) throw std::logic_error("trial exceeded the n + m round bound");
    if (mine == 1) {
      result.winner = mover == 0 ? Player::One : Player::Two;
      return result;
    }
    mover = 1 - mover;
  }
}

struct SimulationConfig {
  Count n = 2;
  Count m = 2;
  Strategy p1 = strategies::optimal();
  Strategy p2 = strategies::optimal();
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

inline nlohmann::json config_to_json(const SimulationConfig& c) {
  return {{"n", c.n}, {"m", c.m}, {"p1", c.p1.name}, {"p2", c.p2.name}};
}

namespace detail {

// Splits [0, trials) into contiguous chunks, one per worker, and sums the
// per-chunk counters. Counter sums are order independent.
template <typename Counters, typename Body>
Counters run_trials(std::uint64_t trials, unsigned workers, Body body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(trials, 256))));
  std::vector<Counters> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto chunk = [&](unsigned w) {
    std::uint64_t lo = trials * w / workers;
    std::uint64_t hi = trials * (w + 1) / workers;
    try {
      for (std::uint64_t i = lo; i < hi; ++i) body(i, partial[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    chunk(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(chunk, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  Counters total{};
  for (const auto& p : partial) total += p;
  return total;
}

struct WinCount {
  std::uint64_t wins = 0;
  WinCount& operator+=(const WinCount& o) {
    wins += o.wins;
    return *this;
  }
};

struct OutcomeCount {
  std::uint64_t wins = 0;
  std::uint64_t losses = 0;
  std::uint64_t undecided = 0;
  OutcomeCount& operator+=(const OutcomeCount& o) {
    wins += o.wins;
    losses += o.losses;
    undecided += o.undecided;
    return *this;
  }
};

}  // namespace detail

inline EstimateReport estimate_win_prob(const SimulationConfig& c) {
  if (c.trials < 1) throw GameError("trials must be >= 1");
  auto total = detail::run_trials<detail::WinCount>(c.trials, c.workers, [&](std::uint64_t i, detail::WinCount& acc) {
    auto rng = SplitMix64::substream(c.seed, i);
    if (play_discrete(c.n, c.m, c.p1, c.p2, rng).winner == Player::One) ++acc.wins;
  });
  return EstimateReport::from_counts(c.trials, total.wins, c.seed);
}

// ---------------------------------------------------------------------------
// Continuous game under bold/halving play.

enum class ContinuousOutcome { PlayerOneWins, PlayerOneLoses, Undecided };

struct ContinuousReport {
  EstimateReport report;  // wins = Player One wins
  std::uint64_t losses = 0;

  double loss_frequency() const {
    return report.trials ? static_cast<double>(losses) / static_cast<double>(report.trials) : 0.0;
  }
  double loss_std_err() const {
    double p = loss_frequency();
    return report.trials ? std::sqrt(p * (1.0 - p) / static_cast<double>(report.trials)) : 0.0;
  }
};

struct ContinuousParams {
  int horizon = 100000;     // moves before a trial is left undecided
  double epsilon = 1e-9;    // escape mass below which the trapped player loses
};

namespace detail {

// Rescales both pools by a common power of two. Exact in binary floating
// point, and the bidding dynamics are invariant under it.
inline void renormalize(double (&pools)[2]) {
  int k = unit_interval_level(std::min(pools[0], pools[1]));
  if (k > 64 || k < -64) {
    pools[0] = std::ldexp(pools[0], -k);
    pools[1] = std::ldexp(pools[1], -k);
  }
}

enum class MoveKind { Trapped, Hit, Miss, Halved };

// One move by `mover` under bold/halving play. A mover in the weeds whose
// escape probability is below epsilon is Trapped and nothing changes;
// otherwise a weeds bid is a Hit or a Miss, and an upper-hand mover halves.
inline MoveKind continuous_move(double (&pools)[2], int mover, double epsilon, SplitMix64& rng) {
  double& mine = pools[mover];
  ContinuousRegion r = decompose_any(mine, pools[1 - mover]);
  MoveKind kind = MoveKind::Halved;
  if (r.kind == ContinuousKind::Weeds) {
    if (2.0 / r.alpha < epsilon) return MoveKind::Trapped;
    double bid = std::ldexp(1.0, r.level);
    bool hit = rng.uniform01() * r.alpha < 1.0;
    mine = hit ? bid : mine - bid;
    kind = hit ? MoveKind::Hit : MoveKind::Miss;
  } else {
    mine *= 0.5;
  }
  renormalize(pools);
  return kind;
}

}  // namespace detail

inline ContinuousOutcome play_continuous(double x, double y, const ContinuousParams& p, SplitMix64& rng) {
  double pools[2] = {x, y};
  for (int move = 0; move < p.horizon; ++move) {
    int mover = move % 2;
    if (detail::continuous_move(pools, mover, p.epsilon, rng) == detail::MoveKind::Trapped) {
      return mover == 0 ? ContinuousOutcome::PlayerOneLoses : ContinuousOutcome::PlayerOneWins;
    }
  }
  return ContinuousOutcome::Undecided;
}

inline void check_continuous(double x, double y, const ContinuousParams& p, std::uint64_t trials) {
  if (!(x > 0.0) || !(y > 0.0)) throw GameError("continuous pools must be positive");
  if (!(p.epsilon > 0.0)) throw GameError("epsilon must be positive");
  if (p.horizon < 1) throw GameError("horizon must be >= 1");
  if (trials < 1) throw GameError("trials must be >= 1");
}

inline ContinuousReport simulate_continuous(double x, double y, const ContinuousParams& p, std::uint64_t trials,
                                            std::uint64_t seed, unsigned workers = 1) {
  check_continuous(x, y, p, trials);
  auto total = detail::run_trials<detail::OutcomeCount>(trials, workers, [&](std::uint64_t i, detail::OutcomeCount& acc) {
    auto rng = SplitMix64::substream(seed, i);
    switch (play_continuous(x, y, p, rng)) {
      case ContinuousOutcome::PlayerOneWins: ++acc.wins; break;
      case ContinuousOutcome::PlayerOneLoses: ++acc.losses; break;
      case ContinuousOutcome::Undecided: ++acc.undecided; break;
    }
  });
  return {EstimateReport::from_counts(trials, total.wins, seed, total.undecided), total.losses};
}

// Frequency with which Player One, starting in the weeds at (alpha, beta),
// ever gets out: one of his weeds bids hits before he is declared trapped.
// Player Two holds the upper hand while Player One stays in the weeds.
inline ContinuousReport estimate_escape(double alpha, double beta, std::uint64_t trials, std::uint64_t seed,
                                        const ContinuousParams& p = {}, unsigned workers = 1) {
  if (!(alpha > 2.0)) throw GameError("alpha must exceed 2");
  if (!(beta > 1.0) || !(beta <= 2.0)) throw GameError("beta must lie in (1, 2]");
  check_continuous(alpha, beta, p, trials);
  auto total = detail::run_trials<detail::OutcomeCount>(trials, workers, [&](std::uint64_t i, detail::OutcomeCount& acc) {
    auto rng = SplitMix64::substream(seed, i);
    double pools[2] = {alpha, beta};
    for (int move = 0; move < p.horizon; ++move) {
      int mover = move % 2;
      switch (detail::continuous_move(pools, mover, p.epsilon, rng)) {
        case detail::MoveKind::Hit:
          if (mover == 0) {
            ++acc.wins;
            return;
          }
          break;
        case detail::MoveKind::Trapped:
          ++acc.losses;
          return;
        default:
          break;
      }
    }
    ++acc.undecided;
  });
  return {EstimateReport::from_counts(trials, total.wins, seed, total.undecided), total.losses};
}

inline nlohmann::json report_to_json(const EstimateReport& r, nlohmann::json config) {
  return {{"config", std::move(config)}, {"seed", r.seed},         {"trials", r.trials},
          {"wins", r.wins},              {"p_hat", r.p_hat},       {"std_err", r.std_err},
          {"undecided", r.undecided}};
}

}  // namespace guesswho
