#include "materna/registry.hpp"

#include <algorithm>

#include "materna/errors.hpp"

namespace materna {

Registry::Registry(std::vector<Facility> facilities, std::int64_t id_code_seed, std::size_t shortlist_k)
    : facilities_(std::move(facilities)), next_id_code_(id_code_seed), shortlist_k_(shortlist_k) {
  validate_facilities(facilities_);
  if (id_code_seed < 1) throw Error(Errc::InvalidArgument, "id_code seed must be positive");
  std::sort(facilities_.begin(), facilities_.end(),
            [](const Facility& a, const Facility& b) { return a.id < b.id; });
}

Registration Registry::register_woman(const msg::Register& reg, Timestamp now) {
  if (reg.age < kMinAge || reg.age > kMaxAge)
    throw Error(Errc::BadAge, "age " + std::to_string(reg.age) + " outside [10, 60]");

  std::unique_lock lock(mu_);
  if (women_.count(reg.phone))
    throw Error(Errc::DuplicatePhone, "phone " + reg.phone.str() + " already registered");
  const auto pick = select_facility(reg.location, facilities_, shortlist_k_);

  auto slot = std::find_if(facilities_.begin(), facilities_.end(),
                           [&](const Facility& f) { return f.id == pick.facility.id; });
  ++slot->registered_count;

  WomanRecord w{reg.phone, next_id_code_++, reg.name, reg.age, reg.location, slot->id, now,
                std::nullopt, {}, true};
  women_.emplace(reg.phone, w);
  return {w, msg::Assign{reg.phone, slot->id, slot->name, pick.distance.value()}};
}

WomanRecord Registry::release_slot(int facility_id, const PhoneId& phone) {
  std::unique_lock lock(mu_);
  auto it = women_.find(phone);
  if (it == women_.end() || !it->second.active)
    throw Error(Errc::UnknownWoman, "no active registration for " + phone.str());
  if (it->second.assigned_facility != facility_id)
    throw Error(Errc::NotRegisteredThere,
                phone.str() + " is not registered at facility " + std::to_string(facility_id));
  auto slot = std::find_if(facilities_.begin(), facilities_.end(),
                           [&](const Facility& f) { return f.id == facility_id; });
  --slot->registered_count;
  it->second.active = false;
  return it->second;
}

WomanRecord& Registry::at(const PhoneId& phone) {
  auto it = women_.find(phone);
  if (it == women_.end()) throw Error(Errc::UnknownWoman, "unknown woman " + phone.str());
  return it->second;
}

WomanRecord Registry::lookup(const PhoneId& phone) const {
  std::shared_lock lock(mu_);
  auto it = women_.find(phone);
  if (it == women_.end()) throw Error(Errc::UnknownWoman, "unknown woman " + phone.str());
  return it->second;
}

std::optional<WomanRecord> Registry::find(const PhoneId& phone) const {
  std::shared_lock lock(mu_);
  auto it = women_.find(phone);
  if (it == women_.end()) return std::nullopt;
  return it->second;
}

WomanRecord Registry::lookup_active(const PhoneId& phone) const {
  auto w = lookup(phone);
  if (!w.active) throw Error(Errc::UnknownWoman, phone.str() + " is no longer registered");
  return w;
}

void Registry::set_conditions(const PhoneId& phone, ConditionSet conditions) {
  std::unique_lock lock(mu_);
  at(phone).conditions = conditions;
}

void Registry::set_gestation_start(const PhoneId& phone, Date start) {
  std::unique_lock lock(mu_);
  at(phone).gestation_start = start;
}

std::vector<Facility> Registry::facilities() const {
  std::shared_lock lock(mu_);
  return facilities_;
}

Facility Registry::facility(int id) const {
  std::shared_lock lock(mu_);
  for (const auto& f : facilities_)
    if (f.id == id) return f;
  throw Error(Errc::InvalidArgument, "unknown facility " + std::to_string(id));
}

std::vector<WomanRecord> Registry::women() const {
  std::shared_lock lock(mu_);
  std::vector<WomanRecord> out;
  out.reserve(women_.size());
  for (const auto& [_, w] : women_) out.push_back(w);
  return out;
}

std::size_t Registry::active_count() const {
  std::shared_lock lock(mu_);
  return static_cast<std::size_t>(
      std::count_if(women_.begin(), women_.end(), [](const auto& kv) { return kv.second.active; }));
}

std::int64_t Registry::next_id_code() const {
  std::shared_lock lock(mu_);
  return next_id_code_;
}

}  // namespace materna
