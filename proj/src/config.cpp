#include "materna/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "materna/errors.hpp"
#include "materna/text.hpp"

namespace materna {

namespace {

[[noreturn]] void bad(std::size_t lineno, const std::string& why) {
  throw Error(Errc::BadConfig, "config line " + std::to_string(lineno) + ": " + why);
}

double positive_number(std::string_view v, std::size_t lineno) {
  double d = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), d);
  if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size() || !std::isfinite(d) || d <= 0.0)
    bad(lineno, "expected a positive number, got '" + std::string(v) + "'");
  return d;
}

long long integer(std::string_view v, std::size_t lineno) {
  long long n = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), n);
  if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size())
    bad(lineno, "expected an integer, got '" + std::string(v) + "'");
  return n;
}

}  // namespace

Config Config::parse(std::string_view document, const std::filesystem::path& base_dir) {
  Config c;
  auto path_of = [&](std::string_view v) {
    std::filesystem::path p{std::string(v)};
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  std::size_t lineno = 0;
  for (auto raw : text::split(document, '\n')) {
    ++lineno;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) bad(lineno, "expected key=value");
    const auto key = text::trim(line.substr(0, eq));
    const auto value = text::trim(line.substr(eq + 1));
    if (key == "id_code_seed") {
      c.id_code_seed = integer(value, lineno);
      if (c.id_code_seed < 1) bad(lineno, "id_code_seed must be positive");
    } else if (key == "heli_threshold_km") {
      c.heli_threshold_km = positive_number(value, lineno);
    } else if (key == "speed_car") {
      c.speed_car = positive_number(value, lineno);
    } else if (key == "speed_boat") {
      c.speed_boat = positive_number(value, lineno);
    } else if (key == "speed_heli") {
      c.speed_heli = positive_number(value, lineno);
    } else if (key == "water_zone_prefix") {
      c.water_zone_prefix = std::string(value);
    } else if (key == "advice_templates_path") {
      c.advice_templates_path = path_of(value);
    } else if (key == "facilities_path") {
      c.facilities_path = path_of(value);
    } else if (key == "listen_addr") {
      c.listen_addr = std::string(value);
    } else if (key == "clock_mode") {
      if (value == "virtual") c.clock_mode = ClockMode::Virtual;
      else if (value == "wall") c.clock_mode = ClockMode::Wall;
      else bad(lineno, "clock_mode must be virtual or wall");
    } else if (key == "first_review_days") {
      const auto n = integer(value, lineno);
      if (n < 1 || n > 365) bad(lineno, "first_review_days must be in [1, 365]");
      c.first_review_days = static_cast<int>(n);
    } else if (key == "clock_start") {
      auto t = parse_timestamp(value);
      if (!t) bad(lineno, "clock_start must be YYYY-MM-DDTHH:MM:SSZ");
      c.clock_start = *t;
    } else {
      bad(lineno, "unknown key '" + std::string(key) + "'");
    }
  }
  c.listen_endpoint();
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::BadConfig, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.parent_path());
}

DispatchSettings Config::dispatch_settings() const {
  return DispatchSettings{heli_threshold_km, speed_car, speed_boat, speed_heli, water_zone_prefix};
}

SchedulerSettings Config::scheduler_settings() const {
  SchedulerSettings s;
  s.first_review_days = first_review_days;
  return s;
}

std::pair<std::string, int> Config::listen_endpoint() const {
  const auto colon = listen_addr.rfind(':');
  if (colon == std::string::npos) throw Error(Errc::BadConfig, "listen_addr must be host:port");
  const auto port = text::parse_uint(std::string_view(listen_addr).substr(colon + 1), 5);
  if (!port || *port > 65535) throw Error(Errc::BadConfig, "bad port in listen_addr");
  return {listen_addr.substr(0, colon), static_cast<int>(*port)};
}

}  // namespace materna
