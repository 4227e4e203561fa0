#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "materna/api.hpp"
#include "materna/config.hpp"
#include "materna/errors.hpp"
#include "materna/facility.hpp"
#include "materna/service.hpp"
#include "materna/simulator.hpp"

namespace {

using namespace materna;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::shared_ptr<Clock> make_clock(const Config& cfg) {
  if (cfg.clock_mode == ClockMode::Wall) return std::make_shared<WallClock>();
  return std::make_shared<VirtualClock>(cfg.clock_start);
}

int cmd_seed(const std::string& path) {
  const auto facilities = load_facilities(path);
  std::cout << facilities.size() << " facilities loaded\n";
  return 0;
}

int cmd_scenario(const std::string& scenario, std::uint64_t seed, const std::string& out_path,
                 const std::string& config_path, const std::string& facilities_path, const std::string& log_path) {
  Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
  if (!facilities_path.empty()) cfg.facilities_path = facilities_path;
  if (!cfg.facilities_path) throw Error(Errc::InvalidArgument, "no facilities: pass --facilities or set facilities_path");
  cfg.clock_mode = ClockMode::Virtual;

  auto setup = ServiceSetup::from_config(cfg);
  const auto steps = sim::expand(sim::parse_scenario(slurp(scenario)), setup.facilities, seed);
  Service service(std::move(setup), make_clock(cfg));
  if (!log_path.empty()) service.attach_log_file(log_path);
  const auto report = sim::run(steps, service).render();
  if (out_path.empty()) {
    std::cout << report;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error(Errc::InvalidArgument, "cannot write " + out_path);
    out << report;
  }
  return 0;
}

int cmd_replay(const std::string& log_path, bool show_snapshot) {
  std::ifstream in(log_path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open " + log_path);
  const auto events = EventLog::read(in);
  const auto service = Service::restore(events);
  std::cout << sim::summarize(events).render();
  if (show_snapshot) std::cout << service->snapshot().dump(2) << '\n';
  return 0;
}

ApiServer* g_server = nullptr;

int cmd_serve(const std::string& config_path, const std::string& log_path) {
  Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
  auto service = std::make_unique<Service>(ServiceSetup::from_config(cfg), make_clock(cfg));
  if (!log_path.empty()) service->attach_log_file(log_path);
  ApiServer server(*service);
  const auto [host, port] = cfg.listen_endpoint();
  const int bound = server.bind(host, port);
  std::cerr << "listening on " << host << ':' << bound << '\n';
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  server.listen();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maternal care SMS gateway, scheduler and dispatcher"};
  app.require_subcommand(1);

  std::string seed_path;
  auto* seed = app.add_subcommand("seed", "Validate a facility file (CSV or GeoJSON)");
  seed->add_option("file", seed_path, "Facility file")->required();

  std::string scenario_path, out_path, config_path, facilities_path, log_path;
  std::uint64_t rng_seed = 1;
  auto* scenario = app.add_subcommand("scenario", "Run a scenario against a fresh service");
  scenario->add_option("file", scenario_path, "Scenario file")->required();
  scenario->add_option("--seed", rng_seed, "Seed for POPULATION steps");
  scenario->add_option("--out", out_path, "Write the report here instead of stdout");
  scenario->add_option("--config", config_path, "Config file");
  scenario->add_option("--facilities", facilities_path, "Facility file (overrides the config)");
  scenario->add_option("--log", log_path, "Write the event log here");

  std::string replay_path;
  bool show_snapshot = false;
  auto* replay = app.add_subcommand("replay", "Rebuild state from an event log and print its report");
  replay->add_option("log", replay_path, "Event log")->required();
  replay->add_flag("--snapshot", show_snapshot, "Also print the restored state as JSON");

  std::string serve_config, serve_log;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--config", serve_config, "Config file");
  serve->add_option("--log", serve_log, "Write the event log here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*seed) return cmd_seed(seed_path);
    if (*scenario)
      return cmd_scenario(scenario_path, rng_seed, out_path, config_path, facilities_path, log_path);
    if (*replay) return cmd_replay(replay_path, show_snapshot);
    if (*serve) return cmd_serve(serve_config, serve_log);
  } catch (const materna::Error& e) {
    std::cerr << "error: " << materna::to_string(e.code()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
