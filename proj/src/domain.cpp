#include "materna/domain.hpp"

#include <array>
#include <utility>

#include "materna/errors.hpp"

namespace materna {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NoFacilities: return "NoFacilities";
    case Errc::NoCapacityAnywhere: return "NoCapacityAnywhere";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::DuplicateFacilityId: return "DuplicateFacilityId";
    case Errc::CapacityViolation: return "CapacityViolation";
    case Errc::DuplicatePhone: return "DuplicatePhone";
    case Errc::BadAge: return "BadAge";
    case Errc::UnknownWoman: return "UnknownWoman";
    case Errc::NotRegisteredThere: return "NotRegisteredThere";
    case Errc::BadNextReview: return "BadNextReview";
    case Errc::SeqConflict: return "SeqConflict";
    case Errc::NoExcuse: return "NoExcuse";
    case Errc::NoPendingReview: return "NoPendingReview";
    case Errc::DateMismatch: return "DateMismatch";
    case Errc::BadWeek: return "BadWeek";
    case Errc::AdviceTooLong: return "AdviceTooLong";
    case Errc::BadText: return "BadText";
    case Errc::BadTemplates: return "BadTemplates";
    case Errc::NoVehicleAvailable: return "NoVehicleAvailable";
    case Errc::UnknownOrder: return "UnknownOrder";
    case Errc::AlreadyClosed: return "AlreadyClosed";
    case Errc::CorruptLog: return "CorruptLog";
    case Errc::BadConfig: return "BadConfig";
    case Errc::BadScenario: return "BadScenario";
  }
  return "Unknown";
}

std::optional<PhoneId> PhoneId::parse(std::string_view digits) {
  if (digits.size() < 7 || digits.size() > 15) return std::nullopt;
  for (char c : digits)
    if (c < '0' || c > '9') return std::nullopt;
  return PhoneId(std::string(digits));
}

PhoneId PhoneId::from(std::string_view digits) {
  auto p = parse(digits);
  if (!p) throw Error(Errc::InvalidArgument, "bad phone id '" + std::string(digits) + "'");
  return *p;
}

namespace {

constexpr std::array<std::pair<Vehicle, std::string_view>, 3> kVehicleWire{{
    {Vehicle::Car, "CAR"},
    {Vehicle::LifeBoat, "BOAT"},
    {Vehicle::Helicopter, "HELI"},
}};

constexpr std::array<std::pair<Condition, std::string_view>, 4> kConditionNames{{
    {Condition::Hypertension, "Hypertension"},
    {Condition::Diabetes, "Diabetes"},
    {Condition::Cardiac, "Cardiac"},
    {Condition::Asthma, "Asthma"},
}};

constexpr std::array<std::pair<Kit, std::string_view>, 5> kKitNames{{
    {Kit::Standard, "Standard"},
    {Kit::Hypertension, "Hypertension"},
    {Kit::Diabetes, "Diabetes"},
    {Kit::Cardiac, "Cardiac"},
    {Kit::Asthma, "Asthma"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E e) {
  for (const auto& [k, v] : table)
    if (k == e) return v;
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table,
                        std::string_view s) {
  for (const auto& [k, v] : table)
    if (v == s) return k;
  return std::nullopt;
}

}  // namespace

std::string_view wire_token(Vehicle v) noexcept { return name_of(kVehicleWire, v); }
std::optional<Vehicle> vehicle_from_wire(std::string_view t) noexcept {
  return lookup(kVehicleWire, t);
}

std::string_view to_string(Vehicle v) noexcept {
  switch (v) {
    case Vehicle::Car: return "Car";
    case Vehicle::LifeBoat: return "LifeBoat";
    case Vehicle::Helicopter: return "Helicopter";
  }
  return "?";
}

std::string_view to_string(Condition c) noexcept { return name_of(kConditionNames, c); }
std::optional<Condition> condition_from_string(std::string_view s) noexcept {
  return lookup(kConditionNames, s);
}

std::string_view to_string(Kit k) noexcept { return name_of(kKitNames, k); }
std::optional<Kit> kit_from_string(std::string_view s) noexcept { return lookup(kKitNames, s); }

}  // namespace materna
