#include "materna/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "materna/errors.hpp"

namespace materna {

bool GeoPoint::valid(double lat, double lon) noexcept {
  return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

std::optional<GeoPoint> GeoPoint::make(double lat, double lon) noexcept {
  if (!valid(lat, lon)) return std::nullopt;
  GeoPoint p;
  p.lat_ = lat;
  p.lon_ = lon;
  return p;
}

GeoPoint::GeoPoint(double lat, double lon) : lat_(lat), lon_(lon) {
  if (!valid(lat, lon))
    throw Error(Errc::InvalidArgument, "coordinate out of range: (" + std::to_string(lat) + ", " +
                                           std::to_string(lon) + ")");
}

DistanceKm::DistanceKm(double km) : km_(km) {
  if (!(km >= 0.0) || !std::isfinite(km))
    throw Error(Errc::InvalidArgument, "distance must be finite and non-negative");
}

DistanceKm haversine_km(const GeoPoint& a, const GeoPoint& b) noexcept {
  constexpr double kRad = std::numbers::pi / 180.0;
  const double lat1 = a.lat_deg() * kRad;
  const double lat2 = b.lat_deg() * kRad;
  // abs() keeps the result bit-identical under argument swap.
  const double dlat = std::abs(b.lat_deg() - a.lat_deg()) * kRad;
  const double dlon = std::abs(b.lon_deg() - a.lon_deg()) * kRad;
  const double s_lat = std::sin(dlat / 2.0);
  const double s_lon = std::sin(dlon / 2.0);
  const double h = s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * s_lon * s_lon;
  return DistanceKm(2.0 * kEarthMeanRadiusKm * std::asin(std::min(1.0, std::sqrt(h))));
}

namespace {

std::vector<RankedFacility> rank_all(const GeoPoint& source, std::span<const Facility> facilities) {
  if (facilities.empty()) throw Error(Errc::NoFacilities, "no facilities loaded");
  std::vector<RankedFacility> ranked;
  ranked.reserve(facilities.size());
  for (const auto& f : facilities) ranked.push_back({f, haversine_km(source, f.location)});
  std::sort(ranked.begin(), ranked.end(), [](const RankedFacility& x, const RankedFacility& y) {
    if (x.distance != y.distance) return x.distance < y.distance;
    return x.facility.id < y.facility.id;
  });
  return ranked;
}

}  // namespace

std::vector<RankedFacility> k_nearest(const GeoPoint& source, std::span<const Facility> facilities,
                                      std::size_t k) {
  if (k == 0) throw Error(Errc::InvalidArgument, "k must be >= 1");
  auto ranked = rank_all(source, facilities);
  if (ranked.size() > k) ranked.erase(ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
  return ranked;
}

RankedFacility select_facility(const GeoPoint& source, std::span<const Facility> facilities,
                               std::size_t shortlist_k) {
  if (shortlist_k == 0) throw Error(Errc::InvalidArgument, "shortlist must be >= 1");
  const auto ranked = rank_all(source, facilities);
  const auto shortlist_end = ranked.begin() + static_cast<std::ptrdiff_t>(std::min(shortlist_k, ranked.size()));

  auto free = [](const RankedFacility& r) { return r.facility.under_capacity(); };
  if (auto it = std::find_if(ranked.begin(), shortlist_end, free); it != shortlist_end) return *it;
  // Whole shortlist full: widen outward over the rest.
  if (auto it = std::find_if(shortlist_end, ranked.end(), free); it != ranked.end()) return *it;
  throw Error(Errc::NoCapacityAnywhere, "every facility is at capacity");
}

}  // namespace materna
