#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "materna/domain.hpp"
#include "materna/facility.hpp"
#include "materna/geo.hpp"
#include "materna/messaging.hpp"
#include "materna/time.hpp"

namespace materna {

inline constexpr std::int64_t kDefaultIdCodeSeed = 25502131;
inline constexpr int kMinAge = 10;
inline constexpr int kMaxAge = 60;

struct WomanRecord {
  PhoneId phone;
  std::int64_t id_code = 0;
  std::string name;
  int age = 0;
  GeoPoint home_location;
  int assigned_facility = 0;
  Timestamp registered_at{};
  std::optional<Date> gestation_start;
  ConditionSet conditions;
  bool active = true;

  friend bool operator==(const WomanRecord&, const WomanRecord&) = default;
};

struct Registration {
  WomanRecord woman;
  msg::Assign assign;
};

/// Facility table plus registered women.
///
/// `register_woman` selects and books a slot under one exclusive lock, so no
/// interleaving of concurrent registrations can overbook a facility. Reads
/// take a shared lock.
class Registry {
 public:
  /// Throws DuplicateFacilityId / CapacityViolation.
  explicit Registry(std::vector<Facility> facilities, std::int64_t id_code_seed = kDefaultIdCodeSeed,
                    std::size_t shortlist_k = kDefaultShortlist);

  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  /// Errors: DuplicatePhone, BadAge, NoFacilities, NoCapacityAnywhere.
  /// Failed registrations leave occupancy untouched.
  Registration register_woman(const msg::Register& reg, Timestamp now);

  /// Frees the woman's slot and marks her inactive.
  /// Errors: UnknownWoman (absent or already released), NotRegisteredThere.
  WomanRecord release_slot(int facility_id, const PhoneId& phone);

  /// Errors: UnknownWoman. Inactive records are still returned.
  WomanRecord lookup(const PhoneId& phone) const;
  std::optional<WomanRecord> find(const PhoneId& phone) const;
  /// Like lookup, but inactive women count as unknown.
  WomanRecord lookup_active(const PhoneId& phone) const;

  void set_conditions(const PhoneId& phone, ConditionSet conditions);
  void set_gestation_start(const PhoneId& phone, Date start);

  std::vector<Facility> facilities() const;
  /// Errors: InvalidArgument for an unknown id.
  Facility facility(int id) const;
  /// Sorted by phone.
  std::vector<WomanRecord> women() const;
  std::size_t active_count() const;
  std::int64_t next_id_code() const;

 private:
  WomanRecord& at(const PhoneId& phone);

  mutable std::shared_mutex mu_;
  std::vector<Facility> facilities_;  // sorted by id
  std::map<PhoneId, WomanRecord> women_;
  std::int64_t next_id_code_;
  std::size_t shortlist_k_;
};

}  // namespace materna
