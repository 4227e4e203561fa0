#include "materna/api.hpp"

#include "httplib.h"
#include "materna/errors.hpp"
#include "materna/json_io.hpp"
#include "materna/service.hpp"

namespace materna {

using nlohmann::json;

namespace {

int status_for(Errc code) {
  switch (code) {
    case Errc::UnknownWoman:
    case Errc::UnknownOrder: return 404;
    case Errc::DuplicatePhone:
    case Errc::AlreadyClosed:
    case Errc::SeqConflict: return 409;
    default: return 400;
  }
}

void reply(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response& res, std::string_view code, const std::string& message, int status) {
  reply(res, json{{"error", code}, {"message", message}}, status);
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      fail(res, to_string(e.code()), e.what(), status_for(e.code()));
    } catch (const json::exception& e) {
      fail(res, "BadRequest", e.what(), 400);
    }
  };
}

json lines_of(const std::vector<msg::Outbound>& out) {
  json lines = json::array();
  for (const auto& m : out) lines.push_back(msg::encode_outbound(m));
  return lines;
}

PhoneId phone_param(const httplib::Request& req) {
  auto p = PhoneId::parse(req.matches[1].str());
  if (!p) throw Error(Errc::InvalidArgument, "bad phone in path");
  return *p;
}

}  // namespace

ApiServer::ApiServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error(Errc::InvalidArgument, "cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port))
    throw Error(Errc::InvalidArgument, "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ApiServer::listen() { server_->listen_after_bind(); }

void ApiServer::stop() {
  if (server_) server_->stop();
}

void ApiServer::install_routes() {
  auto& s = *server_;
  Service& svc = service_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  s.Post("/gateway/inbound", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
           std::string_view line = req.body;
           if (line.ends_with('\n')) line.remove_suffix(1);
           reply(res, json{{"outbound", lines_of(svc.ingest(line))}});
         }));

  s.Get("/outbox", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
          std::size_t max = 100;
          if (req.has_param("max")) {
            const auto v = req.get_param_value("max");
            try {
              max = static_cast<std::size_t>(std::stoul(v));
            } catch (const std::exception&) {
              throw Error(Errc::InvalidArgument, "max must be a positive integer");
            }
          }
          if (max == 0) throw Error(Errc::InvalidArgument, "max must be >= 1");
          json messages = json::array();
          for (const auto& e : svc.drain_outbox(max)) messages.push_back({{"id", e.id}, {"line", e.line}});
          reply(res, json{{"messages", messages}});
        }));

  s.Get("/women", guarded([&svc](const httplib::Request&, httplib::Response& res) {
          json women = json::array();
          for (const auto& w : svc.registry().women()) women.push_back(json_io::to_json(w));
          reply(res, women);
        }));

  s.Get(R"(/women/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
          const auto phone = phone_param(req);
          json body = json_io::to_json(svc.registry().lookup(phone));
          json reviews = json::array();
          for (const auto& r : svc.scheduler().reviews(phone)) reviews.push_back(json_io::to_json(r));
          body["reviews"] = reviews;
          body["pending"] = json_io::to_json(svc.scheduler().pending(phone));
          const auto tri = svc.scheduler().current_trimester(phone, day_of(svc.clock().now()));
          body["trimester"] = tri ? json(*tri) : json(nullptr);
          reply(res, body);
        }));

  s.Post(R"(/reviews/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
           const auto phone = phone_param(req);
           const auto entry = json_io::md_entry_from_json(json::parse(req.body));
           reply(res, json_io::to_json(svc.record_review(phone, entry, svc.clock().now())), 201);
         }));

  s.Post("/advice", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
           const auto body = json::parse(req.body);
           const auto who = advisor_from_string(body.at("who").get<std::string>());
           if (!who || *who == Advisor::Server) throw Error(Errc::InvalidArgument, "who must be MD or Admin");
           const auto target = body.at("target").get<std::string>();
           std::optional<PhoneId> phone;
           if (target != "ALL") phone = PhoneId::from(target);
           const auto out = svc.compose_advice(*who, phone, body.at("text").get<std::string>(), svc.clock().now());
           reply(res, json{{"outbound", lines_of(out)}}, 201);
         }));

  s.Get("/advice", guarded([&svc](const httplib::Request&, httplib::Response& res) {
          json rows = json::array();
          for (const auto& a : svc.scheduler().ledger()) rows.push_back(json_io::to_json(a));
          reply(res, rows);
        }));

  s.Get("/dispatch", guarded([&svc](const httplib::Request&, httplib::Response& res) {
          json orders = json::array();
          for (const auto& o : svc.dispatcher().orders()) orders.push_back(json_io::to_json(o));
          reply(res, orders);
        }));

  s.Post(R"(/dispatch/(\d+)/close)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
           const auto id = std::stoll(req.matches[1].str());
           std::string outcome;
           if (!req.body.empty()) outcome = json::parse(req.body).value("outcome", std::string{});
           reply(res, json_io::to_json(svc.close_order(id, outcome, svc.clock().now())));
         }));

  s.Get("/facilities.geojson", guarded([&svc](const httplib::Request&, httplib::Response& res) {
          res.set_content(write_facilities_geojson(svc.registry().facilities()), "application/geo+json");
        }));

  s.Post("/clock/tick", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
           auto* clock = svc.virtual_clock();
           if (!clock) {
             fail(res, "WallClock", "clock/tick is only available in virtual clock mode", 409);
             return;
           }
           long minutes = 24 * 60;
           if (!req.body.empty()) minutes = json::parse(req.body).value("minutes", minutes);
           if (minutes < 0) throw Error(Errc::InvalidArgument, "minutes must be >= 0");
           const auto now = clock->advance(std::chrono::minutes{minutes});
           const auto out = svc.tick(now);
           reply(res, json{{"now", format_timestamp(now)}, {"outbound", lines_of(out)}});
         }));
}

}  // namespace materna
