#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "materna/dispatch.hpp"
#include "materna/registry.hpp"
#include "materna/scheduler.hpp"
#include "materna/time.hpp"

namespace materna {

enum class ClockMode { Virtual, Wall };

/// Service configuration from `key=value` lines (`#` comments allowed).
/// Relative paths resolve against the config file's directory.
struct Config {
  std::int64_t id_code_seed = kDefaultIdCodeSeed;
  double heli_threshold_km = 15.0;
  double speed_car = 40.0;
  double speed_boat = 30.0;
  double speed_heli = 150.0;
  std::string water_zone_prefix = "W";
  std::optional<std::filesystem::path> advice_templates_path;
  std::optional<std::filesystem::path> facilities_path;
  std::string listen_addr = "127.0.0.1:8080";
  ClockMode clock_mode = ClockMode::Virtual;
  int first_review_days = 14;
  Timestamp clock_start = Timestamp{make_date(2012, 11, 1)};

  /// Throws Error(BadConfig) naming the offending line.
  static Config parse(std::string_view document, const std::filesystem::path& base_dir = {});
  static Config load(const std::filesystem::path& path);

  DispatchSettings dispatch_settings() const;
  SchedulerSettings scheduler_settings() const;
  /// host and port of listen_addr.
  std::pair<std::string, int> listen_endpoint() const;
};

}  // namespace materna
