#include "materna/json_io.hpp"

#include "materna/errors.hpp"

namespace materna::json_io {

namespace {

json optional_or_null(const auto& opt) {
  if (!opt) return nullptr;
  return *opt;
}

[[noreturn]] void invalid(const std::string& why) { throw Error(Errc::InvalidArgument, why); }

}  // namespace

json to_json(const GeoPoint& p) { return {{"lat_deg", p.lat_deg()}, {"lon_deg", p.lon_deg()}}; }

json to_json(const Facility& f) {
  json vehicles = json::array();
  for (auto v : f.vehicles.items()) vehicles.push_back(std::string(to_string(v)));
  return {{"id", f.id},
          {"name", f.name},
          {"zone", f.zone},
          {"location", to_json(f.location)},
          {"registered_count", f.registered_count},
          {"capacity", f.capacity},
          {"vehicles", vehicles}};
}

Facility facility_from_json(const json& j) {
  Facility f;
  f.id = j.at("id").get<int>();
  f.name = j.at("name").get<std::string>();
  f.zone = j.at("zone").get<std::string>();
  f.location = GeoPoint(j.at("location").at("lat_deg").get<double>(),
                        j.at("location").at("lon_deg").get<double>());
  f.registered_count = j.at("registered_count").get<int>();
  f.capacity = j.at("capacity").get<int>();
  for (const auto& v : j.at("vehicles")) {
    const auto name = v.get<std::string>();
    if (name == "Car") f.vehicles.insert(Vehicle::Car);
    else if (name == "LifeBoat") f.vehicles.insert(Vehicle::LifeBoat);
    else if (name == "Helicopter") f.vehicles.insert(Vehicle::Helicopter);
    else invalid("unknown vehicle " + name);
  }
  return f;
}

json conditions_to_json(const ConditionSet& c) {
  json out = json::array();
  for (auto item : c.items()) out.push_back(std::string(to_string(item)));
  return out;
}

ConditionSet conditions_from_json(const json& j) {
  if (!j.is_array()) invalid("conditions must be an array");
  ConditionSet out;
  for (const auto& v : j) {
    if (!v.is_string()) invalid("condition must be a string");
    auto c = condition_from_string(v.get<std::string>());
    if (!c) invalid("unknown condition " + v.get<std::string>());
    out.insert(*c);
  }
  return out;
}

json to_json(const WomanRecord& w) {
  return {{"phone", w.phone.str()},
          {"id_code", w.id_code},
          {"name", w.name},
          {"age", w.age},
          {"home_location", to_json(w.home_location)},
          {"assigned_facility", w.assigned_facility},
          {"registered_at", format_timestamp(w.registered_at)},
          {"gestation_start", w.gestation_start ? json(format_date(*w.gestation_start)) : json(nullptr)},
          {"conditions", conditions_to_json(w.conditions)},
          {"active", w.active}};
}

json to_json(const PrimeInfo& p) {
  return {{"name", p.name},
          {"age", p.age},
          {"home_location", to_json(p.home_location)},
          {"assigned_facility", p.assigned_facility}};
}

json to_json(const Appointment& a) {
  return {{"seq", a.seq},
          {"review_date", format_date(a.date)},
          {"confirmed", a.confirmed},
          {"reminder_sent", a.reminder_sent},
          {"reschedules", a.reschedules}};
}

json to_json(const ReviewRecord& r) {
  return {{"phone", r.phone.str()},
          {"seq", r.seq},
          {"prime_info", to_json(r.prime_info)},
          {"review_date", format_date(r.review_date)},
          {"gestational_week", r.gestational_week},
          {"weight_kg", optional_or_null(r.weight_kg)},
          {"blood_pressure", r.blood_pressure ? json(format_blood_pressure(*r.blood_pressure)) : json(nullptr)},
          {"notes", optional_or_null(r.notes)},
          {"next_review", format_date(r.next.date)},
          {"confirmed", r.next.confirmed},
          {"reminder_sent", r.next.reminder_sent},
          {"reschedules", r.next.reschedules}};
}

json to_json(const AdviceRecord& a) {
  return {{"id_code", a.id_code},
          {"phone", a.phone.str()},
          {"trimester", a.trimester},
          {"advice_done", a.advice_done},
          {"type_of_advice", std::string(to_string(a.type_of_advice))},
          {"who_advisement", std::string(to_string(a.who_advisement))},
          {"message", a.message}};
}

json to_json(const DispatchOrder& o) {
  return {{"order_id", o.order_id},
          {"phone", o.phone.str()},
          {"location", to_json(o.location)},
          {"origin_facility", o.origin_facility},
          {"vehicle", std::string(to_string(o.vehicle))},
          {"kit", std::string(to_string(o.kit))},
          {"distance_km", o.distance_km},
          {"created_at", format_timestamp(o.created_at)},
          {"status", o.closed() ? "Closed" : "Open"},
          {"outcome", optional_or_null(o.outcome)}};
}

json to_json(const MdEntry& e) {
  json j{{"gestational_week", e.gestational_week}, {"next_review", format_date(e.next_review)}};
  if (e.weight_kg) j["weight_kg"] = *e.weight_kg;
  if (e.blood_pressure) j["blood_pressure"] = format_blood_pressure(*e.blood_pressure);
  if (e.notes) j["notes"] = *e.notes;
  if (e.conditions) j["conditions"] = conditions_to_json(*e.conditions);
  if (e.expected_seq) j["seq"] = *e.expected_seq;
  return j;
}

MdEntry md_entry_from_json(const json& j) {
  if (!j.is_object()) invalid("review entry must be a JSON object");
  MdEntry e;
  auto present = [&](const char* key) { return j.contains(key) && !j[key].is_null(); };

  if (!present("gestational_week") || !j["gestational_week"].is_number_integer())
    invalid("gestational_week (integer) is required");
  e.gestational_week = j["gestational_week"].get<int>();

  if (!present("next_review") || !j["next_review"].is_string()) invalid("next_review (YYYY-MM-DD) is required");
  auto next = parse_date(j["next_review"].get<std::string>());
  if (!next) invalid("next_review must be YYYY-MM-DD");
  e.next_review = *next;

  if (present("weight_kg")) {
    if (!j["weight_kg"].is_number()) invalid("weight_kg must be a number");
    e.weight_kg = j["weight_kg"].get<double>();
  }
  if (present("blood_pressure")) {
    if (!j["blood_pressure"].is_string()) invalid("blood_pressure must be \"sys/dia\"");
    e.blood_pressure = parse_blood_pressure(j["blood_pressure"].get<std::string>());
    if (!e.blood_pressure) invalid("blood_pressure must be \"sys/dia\"");
  }
  if (present("notes")) {
    if (!j["notes"].is_string()) invalid("notes must be a string");
    e.notes = j["notes"].get<std::string>();
  }
  if (present("conditions")) e.conditions = conditions_from_json(j["conditions"]);
  if (present("seq")) {
    if (!j["seq"].is_number_integer()) invalid("seq must be an integer");
    e.expected_seq = j["seq"].get<int>();
  }
  return e;
}

}  // namespace materna::json_io
