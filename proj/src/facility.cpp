#include "materna/facility.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "materna/errors.hpp"
#include "materna/text.hpp"

namespace materna {

namespace {

constexpr std::string_view kCsvHeader = "id,name,zone,lat,lon,registered,capacity,vehicles";

[[noreturn]] void malformed(const std::string& where, const std::string& why) {
  throw Error(Errc::MalformedRow, where + ": " + why);
}

std::optional<long long> parse_int(std::string_view s) {
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_degrees(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::fixed);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

VehicleSet parse_vehicles(std::string_view s, const std::string& where) {
  VehicleSet out;
  if (s.empty()) return out;
  for (auto tok : text::split(s, '+')) {
    auto v = vehicle_from_wire(tok);
    if (!v) malformed(where, "unknown vehicle '" + std::string(tok) + "'");
    out.insert(*v);
  }
  return out;
}

void check_name_zone(const Facility& f, const std::string& where) {
  if (f.name.empty() || text::utf8_length(f.name) > kFacilityNameMax || !text::is_wire_text(f.name))
    malformed(where, "name must be 1-20 characters without '|'");
  if (text::utf8_length(f.zone) > kFacilityZoneMax || (!f.zone.empty() && !text::is_wire_text(f.zone)))
    malformed(where, "zone must be at most 7 characters");
}

Facility parse_row(std::string_view line, const std::string& where) {
  const auto cols = text::split(line, ',');
  if (cols.size() != 8) malformed(where, "expected 8 columns, got " + std::to_string(cols.size()));
  Facility f;
  auto id = parse_int(cols[0]);
  if (!id || *id < 1 || *id > 2147483647) malformed(where, "bad id '" + std::string(cols[0]) + "'");
  f.id = static_cast<int>(*id);
  f.name = std::string(cols[1]);
  f.zone = std::string(cols[2]);
  check_name_zone(f, where);
  auto lat = parse_degrees(cols[3]);
  auto lon = parse_degrees(cols[4]);
  if (!lat || !lon) malformed(where, "unparseable latitude/longitude");
  auto loc = GeoPoint::make(*lat, *lon);
  if (!loc) malformed(where, "coordinates out of range");
  f.location = *loc;
  auto reg = parse_int(cols[5]);
  auto cap = parse_int(cols[6]);
  if (!reg || *reg < 0 || *reg > 99999) malformed(where, "bad registered count");
  if (!cap || *cap < 1 || *cap > 99999) malformed(where, "bad capacity");
  f.registered_count = static_cast<int>(*reg);
  f.capacity = static_cast<int>(*cap);
  f.vehicles = parse_vehicles(cols[7], where);
  return f;
}

}  // namespace

std::string format_vehicles(const VehicleSet& v) {
  std::string out;
  for (auto item : v.items()) {
    if (!out.empty()) out += '+';
    out += wire_token(item);
  }
  return out;
}

void validate_facilities(const std::vector<Facility>& facilities) {
  std::set<int> seen;
  for (const auto& f : facilities) {
    if (!seen.insert(f.id).second)
      throw Error(Errc::DuplicateFacilityId, "duplicate facility id " + std::to_string(f.id));
    if (f.registered_count < 0 || f.registered_count > f.capacity)
      throw Error(Errc::CapacityViolation,
                  "facility " + std::to_string(f.id) + " has registered " +
                      std::to_string(f.registered_count) + " > capacity " +
                      std::to_string(f.capacity));
  }
}

std::vector<Facility> read_facilities_csv(std::istream& in) {
  std::vector<Facility> out;
  std::string raw;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || line.front() == '#') continue;
    const std::string where = "line " + std::to_string(lineno);
    if (!header_seen) {
      if (line != kCsvHeader) malformed(where, "expected header '" + std::string(kCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    out.push_back(parse_row(line, where));
  }
  validate_facilities(out);
  return out;
}

std::vector<Facility> read_facilities_geojson(std::string_view document) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    malformed("document", e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array())
    malformed("document", "not a GeoJSON FeatureCollection");

  std::vector<Facility> out;
  std::size_t index = 0;
  for (const auto& feat : doc["features"]) {
    const std::string where = "feature " + std::to_string(index++);
    try {
      const auto& geom = feat.at("geometry");
      if (geom.at("type") != "Point") malformed(where, "geometry must be a Point");
      const auto& coords = geom.at("coordinates");
      if (!coords.is_array() || coords.size() < 2) malformed(where, "bad coordinates");
      const auto& props = feat.at("properties");
      Facility f;
      f.id = props.at("id").get<int>();
      if (f.id < 1) malformed(where, "bad id");
      f.name = props.at("name").get<std::string>();
      f.zone = props.value("zone", std::string{});
      check_name_zone(f, where);
      auto loc = GeoPoint::make(coords[1].get<double>(), coords[0].get<double>());
      if (!loc) malformed(where, "coordinates out of range");
      f.location = *loc;
      f.registered_count = props.value("registered", 0);
      f.capacity = props.at("capacity").get<int>();
      if (f.registered_count < 0 || f.capacity < 1) malformed(where, "bad registered/capacity");
      if (props.contains("vehicles")) {
        const auto& v = props["vehicles"];
        if (v.is_string()) {
          f.vehicles = parse_vehicles(v.get<std::string>(), where);
        } else {
          for (const auto& tok : v)
            for (auto item : parse_vehicles(tok.get<std::string>(), where).items())
              f.vehicles.insert(item);
        }
      }
      out.push_back(std::move(f));
    } catch (const json::exception& e) {
      malformed(where, e.what());
    }
  }
  validate_facilities(out);
  return out;
}

std::vector<Facility> parse_facilities(std::string_view document) {
  const auto body = text::trim(document);
  if (!body.empty() && body.front() == '{') return read_facilities_geojson(document);
  std::istringstream in{std::string(document)};
  return read_facilities_csv(in);
}

std::vector<Facility> load_facilities(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open facility file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_facilities(buf.str());
}

std::string write_facilities_csv(const std::vector<Facility>& facilities) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& f : facilities) {
    out += std::to_string(f.id) + ',' + f.name + ',' + f.zone + ',' +
           text::format_fixed(f.location.lat_deg(), 6) + ',' +
           text::format_fixed(f.location.lon_deg(), 6) + ',' + std::to_string(f.registered_count) +
           ',' + std::to_string(f.capacity) + ',' + format_vehicles(f.vehicles) + '\n';
  }
  return out;
}

std::string write_facilities_geojson(const std::vector<Facility>& facilities) {
  using nlohmann::json;
  json features = json::array();
  for (const auto& f : facilities) {
    features.push_back({
        {"type", "Feature"},
        {"geometry", {{"type", "Point"}, {"coordinates", {f.location.lon_deg(), f.location.lat_deg()}}}},
        {"properties",
         {{"id", f.id},
          {"name", f.name},
          {"zone", f.zone},
          {"registered", f.registered_count},
          {"capacity", f.capacity},
          {"vehicles", format_vehicles(f.vehicles)}}},
    });
  }
  return json{{"type", "FeatureCollection"}, {"features", features}}.dump();
}

}  // namespace materna
