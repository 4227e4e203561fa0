#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "materna/facility.hpp"
#include "materna/geo_point.hpp"

namespace materna {

/// Great-circle distance on a sphere of radius kEarthMeanRadiusKm.
DistanceKm haversine_km(const GeoPoint& a, const GeoPoint& b) noexcept;

struct RankedFacility {
  Facility facility;
  DistanceKm distance;
};

/// The min(k, n) closest facilities, ascending by distance, ties by id.
/// Throws Error(NoFacilities) when `facilities` is empty, InvalidArgument for k == 0.
std::vector<RankedFacility> k_nearest(const GeoPoint& source, std::span<const Facility> facilities,
                                      std::size_t k);

inline constexpr std::size_t kDefaultShortlist = 3;

/// Capacity-aware nearest-facility selection.
///
/// Ranks facilities outward from `source`, inspects the `shortlist_k` closest
/// and takes the nearest one still under capacity. When the whole shortlist is
/// full the search continues through the remaining facilities in ascending
/// distance, so a registrant is never refused while any slot exists.
/// Occupancy is not modified.
///
/// Throws Error(NoFacilities) or Error(NoCapacityAnywhere).
RankedFacility select_facility(const GeoPoint& source, std::span<const Facility> facilities,
                               std::size_t shortlist_k = kDefaultShortlist);

}  // namespace materna
