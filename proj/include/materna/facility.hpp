#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "materna/domain.hpp"
#include "materna/geo_point.hpp"

namespace materna {

/// One maternity care centre or hospital.
struct Facility {
  int id = 0;
  std::string name;  // <= 20 chars
  std::string zone;  // <= 7 chars, opaque
  GeoPoint location;
  int registered_count = 0;
  int capacity = 1;
  VehicleSet vehicles;

  bool under_capacity() const noexcept { return registered_count < capacity; }

  friend bool operator==(const Facility&, const Facility&) = default;
};

inline constexpr std::size_t kFacilityNameMax = 20;
inline constexpr std::size_t kFacilityZoneMax = 7;

// Facility files. CSV with header
// `id,name,zone,lat,lon,registered,capacity,vehicles` (vehicles `+`-joined),
// or a GeoJSON FeatureCollection of points carrying the same properties.
// Errors: MalformedRow (message names the line / feature), DuplicateFacilityId,
// CapacityViolation.
std::vector<Facility> read_facilities_csv(std::istream& in);
std::vector<Facility> read_facilities_geojson(std::string_view document);
/// Dispatches on content: a leading `{` means GeoJSON.
std::vector<Facility> load_facilities(const std::filesystem::path& path);
std::vector<Facility> parse_facilities(std::string_view document);

/// Checks id uniqueness and 0 <= registered <= capacity; throws on breach.
void validate_facilities(const std::vector<Facility>& facilities);

std::string write_facilities_csv(const std::vector<Facility>& facilities);
std::string write_facilities_geojson(const std::vector<Facility>& facilities);

std::string format_vehicles(const VehicleSet& v);

}  // namespace materna
