#pragma once

#include "json.hpp"
#include "materna/dispatch.hpp"
#include "materna/facility.hpp"
#include "materna/registry.hpp"
#include "materna/scheduler.hpp"

// JSON mirrors of the domain types; field names follow the domain types.
namespace materna::json_io {

using nlohmann::json;

json to_json(const GeoPoint& p);
json to_json(const Facility& f);
json to_json(const WomanRecord& w);
json to_json(const PrimeInfo& p);
json to_json(const Appointment& a);
json to_json(const ReviewRecord& r);
json to_json(const AdviceRecord& a);
json to_json(const DispatchOrder& o);
json to_json(const MdEntry& e);

Facility facility_from_json(const json& j);
/// Validates field types and ranges; throws Error(InvalidArgument).
MdEntry md_entry_from_json(const json& j);

json conditions_to_json(const ConditionSet& c);
ConditionSet conditions_from_json(const json& j);

}  // namespace materna::json_io
