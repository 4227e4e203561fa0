#pragma once

#include <compare>
#include <optional>

namespace materna {

inline constexpr double kEarthMeanRadiusKm = 6371.0088;

/// Latitude/longitude in decimal degrees. Out-of-range values are rejected,
/// never clamped. Default-constructs to (0, 0).
class GeoPoint {
 public:
  GeoPoint() noexcept = default;
  /// Throws Error(InvalidArgument) outside [-90,90] x [-180,180] or on NaN.
  GeoPoint(double lat_deg, double lon_deg);
  static std::optional<GeoPoint> make(double lat_deg, double lon_deg) noexcept;
  static bool valid(double lat_deg, double lon_deg) noexcept;

  double lat_deg() const noexcept { return lat_; }
  double lon_deg() const noexcept { return lon_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  double lat_ = 0.0;
  double lon_ = 0.0;
};

class DistanceKm {
 public:
  /// Throws Error(InvalidArgument) for negative or non-finite values.
  explicit DistanceKm(double km);
  double value() const noexcept { return km_; }
  friend auto operator<=>(const DistanceKm&, const DistanceKm&) = default;

 private:
  double km_;
};

}  // namespace materna
