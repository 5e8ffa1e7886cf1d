#pragma once

#include "guesswho/advisor.hpp"
#include "guesswho/advisor_http.hpp"
#include "guesswho/continuous.hpp"
#include "guesswho/figures.hpp"
#include "guesswho/policy.hpp"
#include "guesswho/simulation.hpp"
#include "guesswho/solver.hpp"
#include "guesswho/strategy.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace guesswho::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

struct Options {
  Count max_sum = 64;
  Count n = 0;
  Count m = 0;
  Count max_n = 32;
  Count max_m = 32;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string p1 = "optimal";
  std::string p2 = "optimal";
  std::string grid;
  std::string out;
  std::string format = "csv";
  std::string sim_format = "json";
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string snapshot;
  std::string cors_origin = "*";
  bool matrix = false;
  double x = 4.0;
  double y = 2.0;
  double alpha = 4.0;
  double beta = 2.0;
  double epsilon = 1e-9;
  int horizon = 100000;
};

inline void init_logging() {
  static bool done = false;
  if (done) return;
  done = true;
  auto logger = spdlog::stderr_color_mt("guesswho");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("GW_LOG")) spdlog::set_level(spdlog::level::from_str(level));
}

// Writes to --out when given, otherwise to `out`.
template <typename Fn>
void emit(const Options& o, std::ostream& out, Fn&& fn) {
  if (o.out.empty()) {
    fn(out);
    return;
  }
  std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + o.out);
  fn(f);
  spdlog::info("wrote {}", o.out);
}

inline ContinuousGrid parse_grid(const std::string& spec) {
  ContinuousGrid g;
  if (spec.empty()) return g;
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 4) throw CLI::ValidationError("--grid", "expected ALPHA_MAX,BETA_MAX,ALPHA_STEPS,BETA_STEPS");
  try {
    g.alpha_max = std::stod(parts[0]);
    g.beta_max = std::stod(parts[1]);
    g.alpha_steps = std::stoi(parts[2]);
    g.beta_steps = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw CLI::ValidationError("--grid", "could not parse '" + spec + "'");
  }
  return g;
}

inline int cmd_value(const Options& o, std::ostream& out) {
  check_pools(o.n, o.m);
  Region r = classify(o.n, o.m);
  Rational p = closed_form_value(o.n, o.m);
  out << "n=" << o.n << " m=" << o.m << '\n';
  out << "region=" << to_string(r.kind);
  if (r.level) out << " k=" << *r.level;
  out << '\n';
  out << "p*=" << p << " (" << decimal(p.to_double()) << ")\n";
  if (r.terminal()) {
    out << "bid=none\n";
    return kOk;
  }
  out << "bid=" << optimal_bid(o.n, o.m).value() << '\n';
  Rational pinf = p_infinity_exact(o.n, o.m);
  CorrectionTerm c = correction_identity(o.n, o.m);
  out << "p_inf=" << pinf << " (" << decimal(pinf.to_double()) << ")\n";
  out << "correction=" << c.difference << " (" << decimal(c.difference.to_double()) << ")\n";
  return kOk;
}

inline int cmd_solve(const Options& o, std::ostream& out) {
  SolveTable t = solve_dp(o.max_sum);
  emit(o, out, [&](std::ostream& os) {
    if (o.format == "json") {
      os << table_to_json(t).dump() << '\n';
    } else {
      write_table_csv(os, t);
    }
  });
  return kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  SolveTable t = solve_dp(o.max_sum);
  std::vector<Violation> all = verify_closed_form(t);
  std::size_t deficit_bids = 0;
  auto deficit = verify_weeds_deficit(t, &deficit_bids);
  all.insert(all.end(), deficit.begin(), deficit.end());
  std::size_t states = 0;
  t.for_each_state([&](Count n, Count m) {
    ++states;
    if (n < 2 || m < 2) return;
    CorrectionTerm c = correction_identity(n, m, t.value(n, m));
    if (!c.holds()) {
      all.push_back({"correction", n, m, "difference " + c.difference.str() + " expected " + c.expected.str()});
    }
  });
  nlohmann::json report = {{"max_sum", o.max_sum},
                           {"states", states},
                           {"weeds_deficit_bids", deficit_bids},
                           {"violations", all},
                           {"pass", all.empty()}};
  out << report.dump(o.format == "json" ? 2 : -1) << '\n';
  return all.empty() ? kOk : kVerificationFailed;
}

inline int cmd_heatmap(const Options& o, std::ostream& out) {
  emit(o, out, [&](std::ostream& os) { write_heatmap_csv(os, o.max_n, o.max_m); });
  return kOk;
}

inline int cmd_heatmap_continuous(const Options& o, std::ostream& out) {
  ContinuousGrid g = parse_grid(o.grid);
  emit(o, out, [&](std::ostream& os) { write_continuous_heatmap_csv(os, g); });
  return kOk;
}

inline int cmd_fairness(const Options& o, std::ostream& out) {
  int steps = 1000;
  if (!o.grid.empty()) {
    try {
      steps = std::stoi(o.grid);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--grid", "expected a point count");
    }
  }
  emit(o, out, [&](std::ostream& os) { write_fairness_csv(os, steps); });
  return kOk;
}

inline int cmd_simulate(const Options& o, std::ostream& out) {
  SimulationConfig c;
  c.n = o.n;
  c.m = o.m;
  c.trials = o.trials;
  c.seed = o.seed;
  c.workers = o.workers;
  if (!o.matrix) {
    c.p1 = strategies::by_name(o.p1);
    c.p2 = strategies::by_name(o.p2);
    EstimateReport r = estimate_win_prob(c);
    nlohmann::json j = report_to_json(r, config_to_json(c));
    if (o.sim_format == "csv") {
      emit(o, out, [&](std::ostream& os) {
        os << "p1,p2,n,m,trials,wins,p_hat,std_err\n"
           << o.p1 << ',' << o.p2 << ',' << o.n << ',' << o.m << ',' << r.trials << ',' << r.wins << ','
           << decimal(r.p_hat) << ',' << decimal(r.std_err) << '\n';
      });
    } else {
      emit(o, out, [&](std::ostream& os) { os << j.dump() << '\n'; });
    }
    return kOk;
  }
  emit(o, out, [&](std::ostream& os) {
    os << "p1,p2,n,m,trials,wins,p_hat,std_err\n";
    for (const auto& a : strategies::names()) {
      for (const auto& b : strategies::names()) {
        c.p1 = strategies::by_name(a);
        c.p2 = strategies::by_name(b);
        EstimateReport r = estimate_win_prob(c);
        os << a << ',' << b << ',' << o.n << ',' << o.m << ',' << r.trials << ',' << r.wins << ','
           << decimal(r.p_hat) << ',' << decimal(r.std_err) << '\n';
      }
    }
  });
  return kOk;
}

inline int cmd_simulate_continuous(const Options& o, std::ostream& out) {
  ContinuousParams p{o.horizon, o.epsilon};
  ContinuousReport r = simulate_continuous(o.x, o.y, p, o.trials, o.seed, o.workers);
  nlohmann::json config = {{"x", o.x}, {"y", o.y}, {"epsilon", o.epsilon}, {"horizon", o.horizon}};
  nlohmann::json j = report_to_json(r.report, config);
  j["losses"] = r.losses;
  emit(o, out, [&](std::ostream& os) { os << j.dump() << '\n'; });
  return kOk;
}

inline int cmd_escape(const Options& o, std::ostream& out) {
  ContinuousParams p{o.horizon, o.epsilon};
  ContinuousReport r = estimate_escape(o.alpha, o.beta, o.trials, o.seed, p, o.workers);
  nlohmann::json config = {{"alpha", o.alpha}, {"beta", o.beta}, {"epsilon", o.epsilon}, {"horizon", o.horizon}};
  nlohmann::json j = report_to_json(r.report, config);
  j["expected"] = escape_probability(o.alpha);
  emit(o, out, [&](std::ostream& os) { os << j.dump() << '\n'; });
  return kOk;
}

inline httplib::Server*& running_server() {
  static httplib::Server* srv = nullptr;
  return srv;
}

inline int cmd_serve(const Options& o, std::ostream& out) {
  advisor::SessionStore store;
  if (!o.snapshot.empty() && std::filesystem::exists(o.snapshot)) {
    store.restore(o.snapshot);
    spdlog::info("restored {} sessions from {}", store.size(), o.snapshot);
  }
  httplib::Server srv;
  advisor::HttpFrontend frontend(store, o.cors_origin);
  frontend.mount(srv);
  running_server() = &srv;
  auto on_signal = [](int) {
    if (auto* s = running_server()) s->stop();
  };
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  int port = o.port;
  if (port == 0) {
    port = srv.bind_to_any_port(o.host);
  } else if (!srv.bind_to_port(o.host, port)) {
    throw std::runtime_error("cannot bind " + o.host + ":" + std::to_string(port));
  }
  out << "listening on http://" << o.host << ':' << port << std::endl;
  srv.listen_after_bind();
  running_server() = nullptr;
  if (!o.snapshot.empty()) {
    store.snapshot(o.snapshot);
    spdlog::info("saved {} sessions to {}", store.size(), o.snapshot);
  }
  return kOk;
}

// Parses argv and runs one subcommand. Exit codes: 0 success, 1 failed
// verification, 2 usage or invalid input.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  init_logging();
  Options o;
  CLI::App app{"Exact solver, simulator and advisor for Guess Who?", "guesswho"};
  app.require_subcommand(1);

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* value = app.add_subcommand("value", "Optimal value, bid and region of one state");
  value->add_option("N", o.n, "Mover's pool");
  value->add_option("M", o.m, "Opponent's pool");
  value->add_option("--n", o.n, "Mover's pool");
  value->add_option("--m", o.m, "Opponent's pool");

  auto* solve = app.add_subcommand("solve", "Stage DP table for all n+m <= max-sum");
  solve->add_option("--max-sum", o.max_sum)->check(CLI::Range(Count{3}, Count{4096}));
  solve->add_option("--out", o.out);
  add_format(solve);

  auto* verify = app.add_subcommand("verify", "Check DP against closed form, bids, deficits, corrections");
  verify->add_option("--max-sum", o.max_sum)->check(CLI::Range(Count{3}, Count{4096}));
  add_format(verify);

  auto* heatmap = app.add_subcommand("heatmap", "Optimal win probability grid");
  heatmap->add_option("--max-n", o.max_n)->check(CLI::Range(Count{1}, Count{2048}));
  heatmap->add_option("--max-m", o.max_m)->check(CLI::Range(Count{1}, Count{2048}));
  heatmap->add_option("--out", o.out);

  auto* heatmap_c = app.add_subcommand("heatmap-continuous", "Continuous-game value over the L-shaped region");
  heatmap_c->add_option("--grid", o.grid, "ALPHA_MAX,BETA_MAX,ALPHA_STEPS,BETA_STEPS");
  heatmap_c->add_option("--out", o.out);

  auto* fairness = app.add_subcommand("fairness", "Fair handicap factor over beta in (1,2]");
  fairness->add_option("--grid", o.grid, "Number of beta points");
  fairness->add_option("--out", o.out);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of Player One's win probability");
  simulate->add_option("--n", o.n)->required();
  simulate->add_option("--m", o.m)->required();
  simulate->add_option("--p1", o.p1)->check(CLI::IsMember(strategies::names()));
  simulate->add_option("--p2", o.p2)->check(CLI::IsMember(strategies::names()));
  simulate->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", o.seed);
  simulate->add_option("--workers", o.workers)->check(CLI::Range(1u, 256u));
  simulate->add_flag("--matrix", o.matrix, "All strategy pairs, CSV");
  simulate->add_option("--out", o.out);
  simulate->add_option("--format", o.sim_format)->check(CLI::IsMember({"csv", "json"}));

  auto* sim_c = app.add_subcommand("simulate-continuous", "Monte Carlo of the continuous game");
  sim_c->add_option("--x", o.x);
  sim_c->add_option("--y", o.y);
  sim_c->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  sim_c->add_option("--seed", o.seed);
  sim_c->add_option("--epsilon", o.epsilon)->check(CLI::PositiveNumber);
  sim_c->add_option("--horizon", o.horizon)->check(CLI::PositiveNumber);
  sim_c->add_option("--workers", o.workers)->check(CLI::Range(1u, 256u));
  sim_c->add_option("--out", o.out);

  auto* escape = app.add_subcommand("escape", "Monte Carlo frequency of ever leaving the weeds");
  escape->add_option("--alpha", o.alpha);
  escape->add_option("--beta", o.beta);
  escape->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  escape->add_option("--seed", o.seed);
  escape->add_option("--epsilon", o.epsilon)->check(CLI::PositiveNumber);
  escape->add_option("--horizon", o.horizon)->check(CLI::PositiveNumber);
  escape->add_option("--workers", o.workers)->check(CLI::Range(1u, 256u));
  escape->add_option("--out", o.out);

  auto* serve = app.add_subcommand("serve", "Run the advisor HTTP service");
  serve->add_option("--port", o.port)->check(CLI::Range(0, 65535));
  serve->add_option("--host", o.host);
  serve->add_option("--snapshot", o.snapshot, "Sessions file restored at start, saved at shutdown");
  serve->add_option("--cors-origin", o.cors_origin);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*value) return cmd_value(o, out);
    if (*solve) return cmd_solve(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*heatmap) return cmd_heatmap(o, out);
    if (*heatmap_c) return cmd_heatmap_continuous(o, out);
    if (*fairness) return cmd_fairness(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*sim_c) return cmd_simulate_continuous(o, out);
    if (*escape) return cmd_escape(o, out);
    if (*serve) return cmd_serve(o, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const GameError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace guesswho::cli
