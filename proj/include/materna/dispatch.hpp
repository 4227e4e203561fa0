#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "materna/domain.hpp"
#include "materna/facility.hpp"
#include "materna/geo_point.hpp"
#include "materna/messaging.hpp"
#include "materna/registry.hpp"
#include "materna/time.hpp"

namespace materna {

struct DispatchSettings {
  double heli_threshold_km = 15.0;
  double speed_car_kmh = 40.0;
  double speed_boat_kmh = 30.0;
  double speed_heli_kmh = 150.0;
  std::string water_zone_prefix = "W";

  double speed(Vehicle v) const noexcept;
};

struct DispatchOrder {
  std::int64_t order_id = 0;
  PhoneId phone;
  GeoPoint location;
  int origin_facility = 0;
  Vehicle vehicle = Vehicle::Car;
  Kit kit = Kit::Standard;
  double distance_km = 0.0;
  Timestamp created_at{};
  std::optional<std::string> outcome;  // set once the order is closed

  bool closed() const noexcept { return outcome.has_value(); }
  friend bool operator==(const DispatchOrder&, const DispatchOrder&) = default;
};

struct RescuePlan {
  Facility origin;
  Vehicle vehicle;
  double distance_km;
  Kit kit;
  int eta_min;
};

/// Highest-priority kit for the conditions: Cardiac > Hypertension > Diabetes
/// > Asthma > Standard.
Kit kit_for(const ConditionSet& conditions) noexcept;

/// ceil(distance / speed * 60), at least 1.
int eta_minutes(double distance_km, Vehicle vehicle, const DispatchSettings& settings);

/// Vehicle rule: Helicopter when the nearest vehicle-equipped facility is
/// farther than the threshold and some facility flies; LifeBoat when the zone
/// is a water zone and some facility has a boat; otherwise Car; if no car
/// exists anywhere, whatever the nearest equipped facility has. The origin is
/// always the nearest facility holding the chosen vehicle.
/// Throws Error(NoVehicleAvailable).
RescuePlan plan_rescue(const GeoPoint& location, std::string_view zone, const ConditionSet& conditions,
                       std::span<const Facility> facilities, const DispatchSettings& settings);

struct SosResult {
  DispatchOrder order;
  msg::Rescue rescue;
};

class Dispatcher {
 public:
  Dispatcher(const Registry& registry, DispatchSettings settings = {});

  Dispatcher(const Dispatcher&) = delete;
  Dispatcher& operator=(const Dispatcher&) = delete;

  /// Errors: UnknownWoman (unregistered or released sender), NoVehicleAvailable.
  /// Never touches registration occupancy.
  SosResult handle_sos(const msg::Sos& sos, Timestamp now);

  /// Errors: UnknownOrder, AlreadyClosed.
  DispatchOrder close_order(std::int64_t order_id, const std::string& outcome);

  std::vector<DispatchOrder> orders() const;
  DispatchOrder order(std::int64_t order_id) const;
  const DispatchSettings& settings() const noexcept { return settings_; }

 private:
  const Registry& registry_;
  DispatchSettings settings_;
  mutable std::mutex mu_;
  std::map<std::int64_t, DispatchOrder> orders_;
  std::int64_t next_order_id_ = 1;
};

}  // namespace materna
