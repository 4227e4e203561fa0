#pragma once

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace materna {

class Service;

/// Request/response API used by the operator console and the device
/// simulator:
///
///   POST /gateway/inbound        raw line body -> {"outbound": [lines]}
///   GET  /outbox?max=N           -> {"messages": [{"id", "line"}]}
///   GET  /women, /women/{phone}  -> WomanRecord (+ reviews, pending)
///   POST /reviews/{phone}        MD entry JSON -> ReviewRecord
///   POST /advice                 {"who", "target", "text"} -> {"outbound": [...]}
///   GET  /advice                 -> advice ledger
///   GET  /dispatch               -> orders
///   POST /dispatch/{id}/close    {"outcome"} -> order
///   GET  /facilities.geojson     -> FeatureCollection
///   POST /clock/tick             {"minutes"} (virtual clock only)
///
/// Errors come back as {"error": <code>, "message": <text>} with a 4xx status.
class ApiServer {
 public:
  explicit ApiServer(Service& service);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port or throws.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  void install_routes();

  Service& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace materna
