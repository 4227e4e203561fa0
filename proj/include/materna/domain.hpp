#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "materna/enum_set.hpp"

namespace materna {

/// A woman's identity: her phone number, 7-15 ASCII digits.
class PhoneId {
 public:
  static std::optional<PhoneId> parse(std::string_view digits);
  /// Throws Error(InvalidArgument) on bad input.
  static PhoneId from(std::string_view digits);

  const std::string& str() const noexcept { return digits_; }

  friend auto operator<=>(const PhoneId&, const PhoneId&) = default;

 private:
  explicit PhoneId(std::string digits) : digits_(std::move(digits)) {}
  std::string digits_;
};

enum class Vehicle { Car, LifeBoat, Helicopter };
inline constexpr std::size_t kVehicleCount = 3;
using VehicleSet = EnumSet<Vehicle, kVehicleCount>;

enum class Condition { Hypertension, Diabetes, Cardiac, Asthma };
inline constexpr std::size_t kConditionCount = 4;
using ConditionSet = EnumSet<Condition, kConditionCount>;

enum class Kit { Standard, Hypertension, Diabetes, Cardiac, Asthma };

// Wire tokens: CAR / BOAT / HELI.
std::string_view wire_token(Vehicle v) noexcept;
std::optional<Vehicle> vehicle_from_wire(std::string_view token) noexcept;
std::string_view to_string(Vehicle v) noexcept;

std::string_view to_string(Condition c) noexcept;
std::optional<Condition> condition_from_string(std::string_view s) noexcept;

std::string_view to_string(Kit k) noexcept;
std::optional<Kit> kit_from_string(std::string_view s) noexcept;

}  // namespace materna
