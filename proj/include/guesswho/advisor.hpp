#pragma once

#include "guesswho/game.hpp"
#include "guesswho/rng.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace guesswho::advisor {

using nlohmann::json;

// Error carrying the HTTP status it maps to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

// Largest pool accepted from clients; the what-if curve has one entry per bid.
inline constexpr Count kMaxPool = 1 << 20;

enum class Side { Me, Opponent };

inline std::string to_string(Side s) { return s == Side::Me ? "me" : "opponent"; }

inline Side side_from_string(const std::string& s) {
  if (s == "me") return Side::Me;
  if (s == "opponent") return Side::Opponent;
  throw ServiceError(400, "side must be 'me' or 'opponent', got '" + s + "'");
}

inline Side flip(Side s) { return s == Side::Me ? Side::Opponent : Side::Me; }

inline json fraction_json(const Rational& r) {
  return {{"num", r.num64()}, {"den", r.den64()}, {"approx", std::round(r.to_double() * 1e10) / 1e10}};
}

struct Position {
  Count my_pool = 2;
  Count opp_pool = 2;
  Side to_move = Side::Me;

  bool terminal() const { return my_pool == 1 || opp_pool == 1; }
  Count mover_pool() const { return to_move == Side::Me ? my_pool : opp_pool; }
  Count waiting_pool() const { return to_move == Side::Me ? opp_pool : my_pool; }
  friend bool operator==(const Position&, const Position&) = default;
};

struct Move {
  Side actor = Side::Me;
  std::optional<Count> bid;
  std::optional<bool> answer;  // true = "yes"
  Count resulting_pool = 1;
  friend bool operator==(const Move&, const Move&) = default;
};

struct HistoryEntry {
  Position before;
  Move move;
  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct Session {
  std::string id;
  Position initial;
  Position state;
  std::vector<HistoryEntry> history;
  std::int64_t created_ms = 0;
  std::int64_t updated_ms = 0;
  friend bool operator==(const Session&, const Session&) = default;
};

struct WhatIfPoint {
  Count bid;
  Rational p;
};

// Advice is computed for the player to move; `win_prob` is always the
// advised player's ("me") chance of winning.
struct Advice {
  Side mover = Side::Me;
  Region region;
  std::optional<Count> recommended_bid;
  Rational mover_win_prob;
  Rational win_prob;
  std::vector<WhatIfPoint> what_if;
};

inline void validate_position(const Position& p) {
  if (p.my_pool < 1 || p.opp_pool < 1) throw ServiceError(400, "pool sizes must be >= 1");
  if (p.my_pool == 1 && p.opp_pool == 1) throw ServiceError(400, "state (1,1) is undefined");
  if (p.my_pool > kMaxPool || p.opp_pool > kMaxPool) {
    throw ServiceError(400, "pool sizes above " + std::to_string(kMaxPool) + " are not supported");
  }
}

inline Advice advise(const Position& p) {
  Advice a;
  a.mover = p.to_move;
  if (p.terminal()) {
    bool won = p.my_pool == 1;
    a.region = {won ? RegionKind::TerminalWin : RegionKind::TerminalLoss, std::nullopt};
    a.win_prob = Rational(won ? 1 : 0);
    a.mover_win_prob = p.to_move == Side::Me ? a.win_prob : Rational(1) - a.win_prob;
    return a;
  }
  Count n = p.mover_pool();
  Count m = p.waiting_pool();
  a.region = classify(n, m);
  a.recommended_bid = optimal_bid(n, m).value();
  a.mover_win_prob = closed_form_value(n, m);
  a.win_prob = p.to_move == Side::Me ? a.mover_win_prob : Rational(1) - a.mover_win_prob;
  a.what_if.reserve(static_cast<std::size_t>(n - 1));
  for (Count b = 1; b <= n - 1; ++b) a.what_if.push_back({b, bid_value(n, m, b)});
  return a;
}

// Applies a move to a position, validating it as a legal transition.
inline Position apply_move(const Position& p, Move& mv) {
  if (p.terminal()) throw ServiceError(409, "game is over");
  if (mv.actor != p.to_move) throw ServiceError(409, "it is not " + to_string(mv.actor) + "'s turn");
  Count pool = p.mover_pool();
  if (mv.bid) {
    if (*mv.bid < 1 || *mv.bid > pool - 1) {
      throw ServiceError(422, "bid " + std::to_string(*mv.bid) + " outside [1, " + std::to_string(pool - 1) + "]");
    }
    if (!mv.answer) throw ServiceError(400, "a bid needs an answer");
    mv.resulting_pool = *mv.answer ? *mv.bid : pool - *mv.bid;
  } else if (mv.resulting_pool < 1 || mv.resulting_pool > pool - 1) {
    throw ServiceError(422, "resulting pool " + std::to_string(mv.resulting_pool) + " outside [1, " +
                                std::to_string(pool - 1) + "]");
  }
  Position next = p;
  (p.to_move == Side::Me ? next.my_pool : next.opp_pool) = mv.resulting_pool;
  next.to_move = flip(p.to_move);
  return next;
}

inline Position replay(const Session& s) {
  Position p = s.initial;
  for (const auto& h : s.history) {
    if (!(h.before == p)) throw ServiceError(400, "history of session " + s.id + " is inconsistent");
    Move mv = h.move;
    p = apply_move(p, mv);
    if (mv.resulting_pool != h.move.resulting_pool) {
      throw ServiceError(400, "history of session " + s.id + " records an impossible outcome");
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// JSON

inline json position_json(const Position& p) {
  return {{"my_pool", p.my_pool}, {"opp_pool", p.opp_pool}, {"to_move", to_string(p.to_move)}};
}

inline Position position_from_json(const json& j) {
  Position p;
  p.my_pool = j.at("my_pool").get<Count>();
  p.opp_pool = j.at("opp_pool").get<Count>();
  p.to_move = side_from_string(j.value("to_move", std::string("me")));
  return p;
}

inline json move_json(const Move& m) {
  json j = {{"actor", to_string(m.actor)}, {"resulting_pool", m.resulting_pool}};
  if (m.bid) j["bid"] = *m.bid;
  if (m.answer) j["answer"] = *m.answer ? "yes" : "no";
  return j;
}

inline bool answer_from_string(const std::string& s) {
  if (s == "yes") return true;
  if (s == "no") return false;
  throw ServiceError(422, "answer must be 'yes' or 'no', got '" + s + "'");
}

// Accepts {actor, bid, answer} or {actor, pool} (the directly observed pool).
inline Move move_from_json(const json& j) {
  Move m;
  m.actor = side_from_string(j.at("actor").get<std::string>());
  if (j.contains("bid")) {
    m.bid = j.at("bid").get<Count>();
    if (!j.contains("answer")) throw ServiceError(400, "a bid needs an answer");
    m.answer = answer_from_string(j.at("answer").get<std::string>());
  } else if (j.contains("pool")) {
    m.resulting_pool = j.at("pool").get<Count>();
  } else if (j.contains("resulting_pool")) {
    m.resulting_pool = j.at("resulting_pool").get<Count>();
  } else {
    throw ServiceError(400, "move needs either bid+answer or pool");
  }
  return m;
}

inline json region_json(const Region& r) {
  json j = {{"kind", std::string(to_string(r.kind))}};
  j["level"] = r.level ? json(*r.level) : json(nullptr);
  return j;
}

inline json advice_json(const Advice& a) {
  json curve = json::array();
  for (const auto& w : a.what_if) curve.push_back({{"bid", w.bid}, {"p", fraction_json(w.p)}});
  return {{"mover", to_string(a.mover)},
          {"region", region_json(a.region)},
          {"recommended_bid", a.recommended_bid ? json(*a.recommended_bid) : json(nullptr)},
          {"mover_win_prob", fraction_json(a.mover_win_prob)},
          {"win_prob", fraction_json(a.win_prob)},
          {"what_if", std::move(curve)}};
}

inline json session_json(const Session& s) {
  json hist = json::array();
  for (const auto& h : s.history) hist.push_back({{"before", position_json(h.before)}, {"move", move_json(h.move)}});
  std::string status = s.state.terminal() ? (s.state.my_pool == 1 ? "won" : "lost") : "active";
  return {{"id", s.id},
          {"initial", position_json(s.initial)},
          {"state", position_json(s.state)},
          {"status", status},
          {"version", s.history.size()},
          {"history", std::move(hist)},
          {"created_ms", s.created_ms},
          {"updated_ms", s.updated_ms}};
}

inline Session session_from_json(const json& j) {
  Session s;
  s.id = j.at("id").get<std::string>();
  if (s.id.empty()) throw ServiceError(400, "session id must not be empty");
  s.initial = position_from_json(j.at("initial"));
  validate_position(s.initial);
  for (const auto& h : j.at("history")) {
    HistoryEntry e;
    e.before = position_from_json(h.at("before"));
    const json& mj = h.at("move");
    e.move = move_from_json(mj);
    e.move.resulting_pool = mj.at("resulting_pool").get<Count>();
    s.history.push_back(e);
  }
  s.state = position_from_json(j.at("state"));
  s.created_ms = j.at("created_ms").get<std::int64_t>();
  s.updated_ms = j.at("updated_ms").get<std::int64_t>();
  if (!(replay(s) == s.state)) throw ServiceError(400, "session " + s.id + " state does not match its history");
  return s;
}

// ---------------------------------------------------------------------------
// Store

// In-memory session store. Sessions are independent; operations on one
// session are serialized, and a move that finds the session busy or carries a
// stale version is rejected with 409 instead of overwriting.
class SessionStore {
 public:
  using Clock = std::function<std::int64_t()>;

  explicit SessionStore(std::uint64_t id_seed = std::random_device{}(), Clock clock = system_clock_ms)
      : ids_(id_seed), clock_(std::move(clock)) {}

  std::pair<Session, Advice> create(const Position& p) {
    validate_position(p);
    auto e = std::make_shared<Entry>();
    e->session.initial = p;
    e->session.state = p;
    e->session.created_ms = e->session.updated_ms = clock_();
    std::unique_lock lock(mu_);
    do {
      e->session.id = next_id();
    } while (sessions_.count(e->session.id));
    sessions_[e->session.id] = e;
    return {e->session, advise(p)};
  }

  std::pair<Session, Advice> get(const std::string& id) const {
    auto e = find(id);
    std::lock_guard guard(e->mu);
    return {e->session, advise(e->session.state)};
  }

  std::pair<Session, Advice> record_move(const std::string& id, Move mv,
                                         std::optional<std::size_t> expected_version = std::nullopt) {
    auto e = find(id);
    std::unique_lock guard(e->mu, std::try_to_lock);
    if (!guard.owns_lock()) throw ServiceError(409, "session " + id + " is being updated concurrently");
    Session& s = e->session;
    if (expected_version && *expected_version != s.history.size()) {
      throw ServiceError(409, "stale version " + std::to_string(*expected_version) + ", session is at " +
                                  std::to_string(s.history.size()));
    }
    Position next = apply_move(s.state, mv);
    s.history.push_back({s.state, mv});
    s.state = next;
    s.updated_ms = clock_();
    return {s, advise(s.state)};
  }

  Rational what_if(const std::string& id, Count bid) const {
    auto e = find(id);
    std::lock_guard guard(e->mu);
    const Position& p = e->session.state;
    if (p.terminal()) throw ServiceError(409, "game is over");
    Count n = p.mover_pool();
    if (bid < 1 || bid > n - 1) {
      throw ServiceError(422, "bid " + std::to_string(bid) + " outside [1, " + std::to_string(n - 1) + "]");
    }
    return bid_value(n, p.waiting_pool(), bid);
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return sessions_.size();
  }

  json to_json() const {
    std::shared_lock lock(mu_);
    json arr = json::array();
    for (const auto& [id, e] : sessions_) {
      std::lock_guard guard(e->mu);
      arr.push_back(session_json(e->session));
    }
    return {{"sessions", std::move(arr)}};
  }

  // Replaces the store's contents. On any error the store is left untouched.
  void load_json(const json& j) {
    std::map<std::string, std::shared_ptr<Entry>> loaded;
    try {
      for (const auto& sj : j.at("sessions")) {
        auto e = std::make_shared<Entry>();
        e->session = session_from_json(sj);
        if (!loaded.emplace(e->session.id, e).second) {
          throw ServiceError(400, "duplicate session id " + e->session.id);
        }
      }
    } catch (const json::exception& ex) {
      throw ServiceError(400, std::string("malformed snapshot: ") + ex.what());
    } catch (const GameError& ex) {
      throw ServiceError(400, std::string("invalid snapshot: ") + ex.what());
    }
    std::unique_lock lock(mu_);
    sessions_.swap(loaded);
  }

  void snapshot(const std::string& path) const {
    std::string tmp = path + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write snapshot " + tmp);
      out << to_json().dump(2) << '\n';
      if (!out) throw std::runtime_error("failed writing snapshot " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot replace snapshot " + path);
  }

  void restore(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read snapshot " + path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& ex) {
      throw ServiceError(400, std::string("corrupt snapshot: ") + ex.what());
    }
    load_json(j);
  }

  static std::int64_t system_clock_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
  }

 private:
  struct Entry {
    mutable std::mutex mu;
    Session session;
  };

  std::shared_ptr<Entry> find(const std::string& id) const {
    std::shared_lock lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "no session " + id);
    return it->second;
  }

  std::string next_id() {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(ids_()));
    return buf;
  }

  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  SplitMix64 ids_;
  Clock clock_;
};

}  // namespace guesswho::advisor
