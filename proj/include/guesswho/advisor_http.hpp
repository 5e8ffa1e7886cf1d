#pragma once

#include "guesswho/advisor.hpp"

#include <httplib.h>

#include <string>

namespace guesswho::advisor {

// Routes the advisor REST API onto an httplib server:
//
//   POST /api/session                 {my_pool, opp_pool, to_move} -> {session, advice}
//   GET  /api/session/{id}            -> {session, advice}
//   POST /api/session/{id}/move       {actor, bid, answer} | {actor, pool} [, version]
//   GET  /api/session/{id}/whatif?bid=B
//   GET  /api/health
class HttpFrontend {
 public:
  HttpFrontend(SessionStore& store, std::string cors_origin = "*")
      : store_(store), cors_origin_(std::move(cors_origin)) {}

  void mount(httplib::Server& srv) {
    srv.set_default_headers({{"Access-Control-Allow-Origin", cors_origin_},
                             {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                             {"Access-Control-Allow-Headers", "Content-Type"}});

    srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    srv.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, {{"status", "ok"}});
    });

    srv.Post("/api/session", [this](const httplib::Request& req, httplib::Response& res) {
      handle(res, [&] {
        json body = parse_body(req);
        Position p;
        try {
          p = position_from_json(body);
        } catch (const json::exception& ex) {
          throw ServiceError(400, std::string("invalid session request: ") + ex.what());
        }
        auto [s, a] = store_.create(p);
        reply(res, 201, {{"session", session_json(s)}, {"advice", advice_json(a)}});
      });
    });

    srv.Get(R"(/api/session/([0-9a-zA-Z_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
      handle(res, [&] {
        auto [s, a] = store_.get(req.matches[1]);
        reply(res, 200, {{"session", session_json(s)}, {"advice", advice_json(a)}});
      });
    });

    srv.Post(R"(/api/session/([0-9a-zA-Z_-]+)/move)", [this](const httplib::Request& req, httplib::Response& res) {
      handle(res, [&] {
        json body = parse_body(req);
        Move mv;
        std::optional<std::size_t> version;
        try {
          mv = move_from_json(body);
          if (body.contains("version")) version = body.at("version").get<std::size_t>();
        } catch (const json::exception& ex) {
          throw ServiceError(400, std::string("invalid move: ") + ex.what());
        }
        auto [s, a] = store_.record_move(req.matches[1], mv, version);
        reply(res, 200, {{"session", session_json(s)}, {"advice", advice_json(a)}});
      });
    });

    srv.Get(R"(/api/session/([0-9a-zA-Z_-]+)/whatif)", [this](const httplib::Request& req, httplib::Response& res) {
      handle(res, [&] {
        if (!req.has_param("bid")) throw ServiceError(400, "missing bid parameter");
        Count bid = 0;
        try {
          std::size_t used = 0;
          std::string raw = req.get_param_value("bid");
          bid = std::stoll(raw, &used);
          if (used != raw.size()) throw std::invalid_argument(raw);
        } catch (const std::exception&) {
          throw ServiceError(400, "bid must be an integer");
        }
        Rational p = store_.what_if(req.matches[1], bid);
        reply(res, 200, {{"bid", bid}, {"p", fraction_json(p)}});
      });
    });
  }

 private:
  static json parse_body(const httplib::Request& req) {
    try {
      return json::parse(req.body);
    } catch (const json::exception&) {
      throw ServiceError(400, "request body is not valid JSON");
    }
  }

  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  template <typename Fn>
  static void handle(httplib::Response& res, Fn&& fn) {
    try {
      fn();
    } catch (const ServiceError& e) {
      reply(res, e.status(), {{"error", e.what()}, {"status", e.status()}});
    } catch (const GameError& e) {
      reply(res, 400, {{"error", e.what()}, {"status", 400}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", e.what()}, {"status", 500}});
    }
  }

  SessionStore& store_;
  std::string cors_origin_;
};

}  // namespace guesswho::advisor
