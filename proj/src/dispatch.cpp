#include "materna/dispatch.hpp"

#include <cmath>

#include "materna/errors.hpp"
#include "materna/geo.hpp"
#include "materna/text.hpp"

namespace materna {

double DispatchSettings::speed(Vehicle v) const noexcept {
  switch (v) {
    case Vehicle::Car: return speed_car_kmh;
    case Vehicle::LifeBoat: return speed_boat_kmh;
    case Vehicle::Helicopter: return speed_heli_kmh;
  }
  return speed_car_kmh;
}

Kit kit_for(const ConditionSet& conditions) noexcept {
  if (conditions.contains(Condition::Cardiac)) return Kit::Cardiac;
  if (conditions.contains(Condition::Hypertension)) return Kit::Hypertension;
  if (conditions.contains(Condition::Diabetes)) return Kit::Diabetes;
  if (conditions.contains(Condition::Asthma)) return Kit::Asthma;
  return Kit::Standard;
}

int eta_minutes(double distance_km, Vehicle vehicle, const DispatchSettings& settings) {
  const double speed = settings.speed(vehicle);
  if (!(speed > 0.0)) throw Error(Errc::InvalidArgument, "vehicle speed must be positive");
  const double minutes = std::ceil(distance_km / speed * 60.0);
  return std::max(1, static_cast<int>(minutes));
}

namespace {

struct Candidate {
  const Facility* facility = nullptr;
  double distance_km = 0.0;
};

// Nearest facility satisfying `pred`, ties by id.
template <typename Pred>
std::optional<Candidate> nearest(const GeoPoint& at, std::span<const Facility> facilities, Pred pred) {
  std::optional<Candidate> best;
  for (const auto& f : facilities) {
    if (!pred(f)) continue;
    const double d = haversine_km(at, f.location).value();
    if (!best || d < best->distance_km || (d == best->distance_km && f.id < best->facility->id))
      best = Candidate{&f, d};
  }
  return best;
}

std::optional<Candidate> nearest_with(const GeoPoint& at, std::span<const Facility> facilities, Vehicle v) {
  return nearest(at, facilities, [v](const Facility& f) { return f.vehicles.contains(v); });
}

}  // namespace

RescuePlan plan_rescue(const GeoPoint& location, std::string_view zone, const ConditionSet& conditions,
                       std::span<const Facility> facilities, const DispatchSettings& settings) {
  const auto any = nearest(location, facilities, [](const Facility& f) { return !f.vehicles.empty(); });
  if (!any) throw Error(Errc::NoVehicleAvailable, "no facility holds a rescue vehicle");

  auto choose = [&]() -> std::pair<Vehicle, Candidate> {
    if (any->distance_km > settings.heli_threshold_km)
      if (auto heli = nearest_with(location, facilities, Vehicle::Helicopter))
        return {Vehicle::Helicopter, *heli};
    const bool water = !settings.water_zone_prefix.empty() && zone.starts_with(settings.water_zone_prefix);
    if (water)
      if (auto boat = nearest_with(location, facilities, Vehicle::LifeBoat))
        return {Vehicle::LifeBoat, *boat};
    if (auto car = nearest_with(location, facilities, Vehicle::Car)) return {Vehicle::Car, *car};
    // No car anywhere: take what the nearest equipped facility has.
    const Vehicle v = any->facility->vehicles.items().front();
    return {v, *nearest_with(location, facilities, v)};
  };
  const auto [vehicle, from] = choose();
  return RescuePlan{*from.facility, vehicle, from.distance_km, kit_for(conditions),
                    eta_minutes(from.distance_km, vehicle, settings)};
}

Dispatcher::Dispatcher(const Registry& registry, DispatchSettings settings)
    : registry_(registry), settings_(std::move(settings)) {}

SosResult Dispatcher::handle_sos(const msg::Sos& sos, Timestamp now) {
  const auto woman = registry_.lookup_active(sos.phone);
  const auto facilities = registry_.facilities();
  const auto home = registry_.facility(woman.assigned_facility);
  const auto plan = plan_rescue(sos.location, home.zone, woman.conditions, facilities, settings_);

  std::lock_guard lock(mu_);
  DispatchOrder order{next_order_id_++, sos.phone,     sos.location, plan.origin.id, plan.vehicle,
                      plan.kit,         plan.distance_km, now,          std::nullopt};
  orders_.emplace(order.order_id, order);
  return {order, msg::Rescue{sos.phone, plan.vehicle, plan.eta_min}};
}

DispatchOrder Dispatcher::close_order(std::int64_t order_id, const std::string& outcome) {
  std::lock_guard lock(mu_);
  auto it = orders_.find(order_id);
  if (it == orders_.end()) throw Error(Errc::UnknownOrder, "unknown order " + std::to_string(order_id));
  if (it->second.closed())
    throw Error(Errc::AlreadyClosed, "order " + std::to_string(order_id) + " is already closed");
  it->second.outcome = outcome;
  return it->second;
}

std::vector<DispatchOrder> Dispatcher::orders() const {
  std::lock_guard lock(mu_);
  std::vector<DispatchOrder> out;
  for (const auto& [_, o] : orders_) out.push_back(o);
  return out;
}

DispatchOrder Dispatcher::order(std::int64_t order_id) const {
  std::lock_guard lock(mu_);
  auto it = orders_.find(order_id);
  if (it == orders_.end()) throw Error(Errc::UnknownOrder, "unknown order " + std::to_string(order_id));
  return it->second;
}

}  // namespace materna
