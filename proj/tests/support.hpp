#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "materna/facility.hpp"
#include "materna/geo_point.hpp"

namespace materna::testing {

// Spherical law of cosines; shares nothing with the library's haversine.
inline double cosine_law_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double p1 = lat1 * rad, p2 = lat2 * rad, dl = (lon2 - lon1) * rad;
  double c = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
  c = std::clamp(c, -1.0, 1.0);
  return 6371.0088 * std::acos(c);
}

inline double cosine_law_km(const GeoPoint& a, const GeoPoint& b) {
  return cosine_law_km(a.lat_deg(), a.lon_deg(), b.lat_deg(), b.lon_deg());
}

// Full sort by distance then id; first facility with a free slot.
inline std::optional<int> nearest_free_oracle(const GeoPoint& src, const std::vector<Facility>& fs) {
  std::vector<std::pair<double, int>> order;
  for (std::size_t i = 0; i < fs.size(); ++i) order.emplace_back(cosine_law_km(src, fs[i].location), static_cast<int>(i));
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return fs[a.second].id < fs[b.second].id;
  });
  for (const auto& [d, i] : order)
    if (fs[i].registered_count < fs[i].capacity) return fs[i].id;
  return std::nullopt;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline GeoPoint random_point(std::mt19937_64& rng) {
  return GeoPoint(uniform(rng, -90.0, 90.0), uniform(rng, -180.0, 180.0));
}

inline GeoPoint random_point_near(std::mt19937_64& rng, double lat, double lon, double spread) {
  return GeoPoint(std::clamp(lat + uniform(rng, -spread, spread), -90.0, 90.0),
                  std::clamp(lon + uniform(rng, -spread, spread), -180.0, 180.0));
}

inline std::vector<Facility> random_facilities(std::mt19937_64& rng, int n, double lat, double lon, double spread) {
  std::vector<Facility> out;
  for (int i = 0; i < n; ++i) {
    Facility f;
    f.id = i + 1;
    f.name = "F" + std::to_string(i + 1);
    f.zone = (rng() % 5 == 0) ? "W" + std::to_string(i % 100) : "Z" + std::to_string(i % 100);
    f.location = random_point_near(rng, lat, lon, spread);
    f.capacity = uniform_int(rng, 1, 20);
    f.registered_count = uniform_int(rng, 0, f.capacity);
    out.push_back(f);
  }
  return out;
}

// Source and three facilities placed so the distances are 0.5, 3.7 and 6.5 km.
inline const GeoPoint kThreeSiteSource{36.190000, 44.010000};

inline std::vector<Facility> three_site_facilities() {
  Facility a{1, "Ankawa", "ERB-N", GeoPoint(36.193180, 44.006060), 40, 40, {}};
  Facility b{2, "Tayrawa", "ERB-SW", GeoPoint(36.145211, 43.963469), 12, 50, {}};
  Facility c{3, "Maternity Hospital", "ERB-C", GeoPoint(36.173357, 44.045698), 20, 60, {}};
  b.vehicles.insert(Vehicle::Car);
  c.vehicles.insert(Vehicle::Car);
  c.vehicles.insert(Vehicle::Helicopter);
  return {a, b, c};
}

}  // namespace materna::testing
