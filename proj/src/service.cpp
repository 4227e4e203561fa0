#include "materna/service.hpp"

#include <fstream>

#include "materna/errors.hpp"
#include "materna/json_io.hpp"
#include "materna/text.hpp"

namespace materna {

using nlohmann::json;

Timestamp VirtualClock::now() const {
  std::lock_guard lock(mu_);
  return now_;
}

void VirtualClock::set(Timestamp t) {
  std::lock_guard lock(mu_);
  now_ = t;
}

Timestamp VirtualClock::advance(std::chrono::minutes by) {
  std::lock_guard lock(mu_);
  now_ += by;
  return now_;
}

Timestamp WallClock::now() const {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

msg::ErrCode wire_error_for(Errc code) noexcept {
  switch (code) {
    case Errc::DuplicatePhone: return msg::ErrCode::Dup;
    case Errc::NoFacilities:
    case Errc::NoCapacityAnywhere:
    case Errc::NoVehicleAvailable: return msg::ErrCode::NoCap;
    case Errc::UnknownWoman: return msg::ErrCode::Unreg;
    case Errc::BadAge: return msg::ErrCode::BadAge;
    case Errc::NoExcuse:
    case Errc::NoPendingReview: return msg::ErrCode::NoExcuse;
    default: return msg::ErrCode::BadMsg;
  }
}

ServiceSetup ServiceSetup::from_config(const Config& config) {
  ServiceSetup s;
  s.id_code_seed = config.id_code_seed;
  s.dispatch = config.dispatch_settings();
  s.scheduler = config.scheduler_settings();
  if (config.facilities_path) s.facilities = load_facilities(*config.facilities_path);
  if (config.advice_templates_path) s.templates = AdviceTemplates::load(*config.advice_templates_path);
  return s;
}

json ServiceSetup::to_json() const {
  json facilities_json = json::array();
  for (const auto& f : facilities) facilities_json.push_back(json_io::to_json(f));
  return {{"id_code_seed", id_code_seed},
          {"heli_threshold_km", dispatch.heli_threshold_km},
          {"speed_car", dispatch.speed_car_kmh},
          {"speed_boat", dispatch.speed_boat_kmh},
          {"speed_heli", dispatch.speed_heli_kmh},
          {"water_zone_prefix", dispatch.water_zone_prefix},
          {"first_review_days", scheduler.first_review_days},
          {"templates", templates.text},
          {"facilities", facilities_json}};
}

ServiceSetup ServiceSetup::from_json(const json& j) {
  ServiceSetup s;
  s.id_code_seed = j.at("id_code_seed").get<std::int64_t>();
  s.dispatch.heli_threshold_km = j.at("heli_threshold_km").get<double>();
  s.dispatch.speed_car_kmh = j.at("speed_car").get<double>();
  s.dispatch.speed_boat_kmh = j.at("speed_boat").get<double>();
  s.dispatch.speed_heli_kmh = j.at("speed_heli").get<double>();
  s.dispatch.water_zone_prefix = j.at("water_zone_prefix").get<std::string>();
  s.scheduler.first_review_days = j.at("first_review_days").get<int>();
  s.templates.text = j.at("templates").get<std::array<std::string, 3>>();
  for (const auto& f : j.at("facilities")) s.facilities.push_back(json_io::facility_from_json(f));
  return s;
}

Service::Service(ServiceSetup setup, std::shared_ptr<Clock> clock)
    : clock_(clock ? std::move(clock) : std::make_shared<VirtualClock>(Config{}.clock_start)),
      registry_(setup.facilities, setup.id_code_seed),
      scheduler_(registry_, setup.templates, setup.scheduler),
      dispatcher_(registry_, setup.dispatch) {
  log_.append(clock_->now(), EventKind::Configured, setup.to_json().dump());
}

Service::~Service() = default;

void Service::queue(const msg::Outbound& out, Timestamp now) {
  auto line = msg::encode_outbound(out);
  outbox_.push_back(OutboxEntry{static_cast<std::int64_t>(outbox_.size()) + 1, out, line, Delivery::Queued});
  log_.append(now, EventKind::OutboundQueued, std::move(line));
}

void Service::queue_all(const std::vector<msg::Outbound>& out, Timestamp now) {
  for (const auto& m : out) queue(m, now);
}

std::vector<msg::Outbound> Service::route(const msg::Inbound& in, Timestamp now) {
  const PhoneId& phone = msg::sender(in);
  try {
    if (const auto* reg = std::get_if<msg::Register>(&in)) {
      auto r = registry_.register_woman(*reg, now);
      scheduler_.on_registered(r.woman);
      return {r.assign};
    }
    if (const auto* sos = std::get_if<msg::Sos>(&in)) {
      auto r = dispatcher_.handle_sos(*sos, now);
      log_.append(now, EventKind::OrderOpened, json_io::to_json(r.order).dump());
      return {r.rescue};
    }
    if (const auto* chg = std::get_if<msg::ChangeReview>(&in)) {
      scheduler_.reschedule(*chg, now);
      return {};
    }
    scheduler_.confirm(std::get<msg::Confirm>(in));
    return {};
  } catch (const Error& e) {
    return {msg::Err{phone, wire_error_for(e.code())}};
  }
}

std::vector<msg::Outbound> Service::ingest(std::string_view line, Timestamp now) {
  std::lock_guard lock(mu_);
  std::optional<msg::Inbound> parsed;
  try {
    parsed = msg::parse_inbound(line);
  } catch (const ParseError& e) {
    const msg::Err reply{msg::salvage_phone(line), msg::ErrCode::BadMsg};
    auto escaped = text::percent_escape(line);
    log_.append(now, EventKind::InboundRejected, escaped);
    dead_letters_.push_back(DeadLetter{now, std::move(escaped), e.reason(), e.offset(), msg::encode_outbound(reply)});
    if (reply.phone) queue(reply, now);
    return {reply};
  }
  log_.append(now, EventKind::InboundAccepted, std::string(line));
  auto out = route(*parsed, now);
  queue_all(out, now);
  return out;
}

std::vector<msg::Outbound> Service::ingest(std::string_view line) { return ingest(line, clock_->now()); }

std::vector<OutboxEntry> Service::drain_outbox(std::size_t max, Timestamp now) {
  if (max == 0) throw Error(Errc::InvalidArgument, "max must be >= 1");
  std::lock_guard lock(mu_);
  std::vector<OutboxEntry> out;
  while (out.size() < max && next_unfetched_ < outbox_.size()) {
    auto& entry = outbox_[next_unfetched_++];
    entry.state = Delivery::Fetched;
    out.push_back(entry);
  }
  if (!out.empty()) log_.append(now, EventKind::OutboxFetched, json{{"count", out.size()}}.dump());
  return out;
}

std::vector<OutboxEntry> Service::drain_outbox(std::size_t max) { return drain_outbox(max, clock_->now()); }

std::vector<msg::Outbound> Service::tick(Timestamp now) {
  std::lock_guard lock(mu_);
  log_.append(now, EventKind::ClockTick, "");
  std::vector<msg::Outbound> out;
  const Date today = day_of(now);
  for (auto& r : scheduler_.tick(today)) out.emplace_back(std::move(r));
  for (auto& a : scheduler_.advice_due(today)) out.emplace_back(std::move(a.sms));
  queue_all(out, now);
  return out;
}

ReviewRecord Service::record_review(const PhoneId& phone, const MdEntry& entry, Timestamp now) {
  std::lock_guard lock(mu_);
  auto r = scheduler_.record_review(phone, entry, now);
  log_.append(now, EventKind::ReviewRecorded,
              json{{"phone", phone.str()}, {"entry", json_io::to_json(entry)}}.dump());
  return r;
}

std::vector<msg::Outbound> Service::compose_advice(Advisor who, const std::optional<PhoneId>& target,
                                                   const std::string& body, Timestamp now) {
  std::lock_guard lock(mu_);
  auto issued = scheduler_.compose_advice(who, target, body, day_of(now));
  log_.append(now, EventKind::AdviceComposed,
              json{{"who", std::string(to_string(who))},
                   {"target", target ? target->str() : std::string("ALL")},
                   {"text", body}}
                  .dump());
  std::vector<msg::Outbound> out;
  for (auto& a : issued) out.emplace_back(std::move(a.sms));
  queue_all(out, now);
  return out;
}

DispatchOrder Service::close_order(std::int64_t order_id, const std::string& outcome, Timestamp now) {
  std::lock_guard lock(mu_);
  auto o = dispatcher_.close_order(order_id, outcome);
  log_.append(now, EventKind::OrderClosed, json{{"order_id", order_id}, {"outcome", outcome}}.dump());
  return o;
}

WomanRecord Service::release_slot(int facility_id, const PhoneId& phone, Timestamp now) {
  std::lock_guard lock(mu_);
  auto w = registry_.release_slot(facility_id, phone);
  scheduler_.on_released(phone);
  log_.append(now, EventKind::SlotReleased, json{{"facility_id", facility_id}, {"phone", phone.str()}}.dump());
  return w;
}

json Service::snapshot() const {
  std::lock_guard lock(mu_);
  json facilities = json::array();
  for (const auto& f : registry_.facilities()) facilities.push_back(json_io::to_json(f));
  json women = json::array();
  for (const auto& w : registry_.women()) women.push_back(json_io::to_json(w));
  json charts = json::array();
  for (const auto& c : scheduler_.charts()) {
    json reviews = json::array();
    for (const auto& r : c.reviews) reviews.push_back(json_io::to_json(r));
    charts.push_back({{"phone", c.phone.str()},
                      {"active", c.active},
                      {"pending", json_io::to_json(c.pending)},
                      {"reviews", reviews},
                      {"last_advised_trimester",
                       c.last_advised_trimester ? json(*c.last_advised_trimester) : json(nullptr)}});
  }
  json ledger = json::array();
  for (const auto& a : scheduler_.ledger()) ledger.push_back(json_io::to_json(a));
  json orders = json::array();
  for (const auto& o : dispatcher_.orders()) orders.push_back(json_io::to_json(o));
  json outbox = json::array();
  for (const auto& e : outbox_)
    outbox.push_back({{"id", e.id}, {"line", e.line}, {"state", e.state == Delivery::Queued ? "Queued" : "Fetched"}});
  json dead = json::array();
  for (const auto& d : dead_letters_)
    dead.push_back({{"at", format_timestamp(d.at)},
                    {"raw", d.raw},
                    {"reason", d.reason},
                    {"offset", d.offset},
                    {"reply", d.reply}});
  return {{"facilities", facilities}, {"women", women},   {"charts", charts},
          {"advice_ledger", ledger},  {"orders", orders}, {"outbox", outbox},
          {"dead_letters", dead},     {"next_id_code", registry_.next_id_code()}};
}

namespace {

[[noreturn]] void corrupt(std::int64_t seq, const std::string& why) {
  throw Error(Errc::CorruptLog, "corrupt event log at seq " + std::to_string(seq) + ": " + why);
}

}  // namespace

std::unique_ptr<Service> Service::restore(const std::vector<Event>& log) {
  if (log.empty()) return std::make_unique<Service>(ServiceSetup{});
  for (std::size_t i = 0; i < log.size(); ++i)
    if (log[i].seq != static_cast<std::int64_t>(i) + 1) corrupt(static_cast<std::int64_t>(i) + 1, "sequence gap");
  if (log[0].kind != EventKind::Configured) corrupt(1, "log must start with Configured");

  auto clock = std::make_shared<VirtualClock>(log[0].at);
  std::unique_ptr<Service> svc;
  try {
    svc = std::make_unique<Service>(ServiceSetup::from_json(json::parse(log[0].payload)), clock);
  } catch (const std::exception& e) {
    corrupt(1, e.what());
  }

  std::size_t verified = 0;
  auto verify = [&] {
    const auto& regenerated = svc->log_.events();
    for (; verified < regenerated.size(); ++verified) {
      const auto seq = static_cast<std::int64_t>(verified) + 1;
      if (verified >= log.size()) corrupt(seq, "replay produced events missing from the log");
      if (format_event(regenerated[verified]) != format_event(log[verified]))
        corrupt(seq, "replay diverges from the log");
    }
  };
  verify();

  for (std::size_t i = 1; i < log.size(); ++i) {
    const Event& e = log[i];
    if (i < verified) continue;  // derived event already regenerated and checked
    clock->set(e.at);
    try {
      const auto payload = e.kind == EventKind::InboundAccepted || e.kind == EventKind::InboundRejected ||
                                   e.kind == EventKind::ClockTick
                               ? json()
                               : json::parse(e.payload);
      switch (e.kind) {
        case EventKind::InboundAccepted: svc->ingest(e.payload, e.at); break;
        case EventKind::InboundRejected: {
          auto raw = text::percent_unescape(e.payload);
          if (!raw) corrupt(e.seq, "bad escaped payload");
          svc->ingest(*raw, e.at);
          break;
        }
        case EventKind::ReviewRecorded:
          svc->record_review(PhoneId::from(payload.at("phone").get<std::string>()),
                             json_io::md_entry_from_json(payload.at("entry")), e.at);
          break;
        case EventKind::AdviceComposed: {
          auto who = advisor_from_string(payload.at("who").get<std::string>());
          if (!who) corrupt(e.seq, "bad advisor");
          const auto target = payload.at("target").get<std::string>();
          svc->compose_advice(*who, target == "ALL" ? std::nullopt : std::optional(PhoneId::from(target)),
                              payload.at("text").get<std::string>(), e.at);
          break;
        }
        case EventKind::ClockTick: svc->tick(e.at); break;
        case EventKind::OrderClosed:
          svc->close_order(payload.at("order_id").get<std::int64_t>(), payload.at("outcome").get<std::string>(),
                           e.at);
          break;
        case EventKind::SlotReleased:
          svc->release_slot(payload.at("facility_id").get<int>(),
                            PhoneId::from(payload.at("phone").get<std::string>()), e.at);
          break;
        case EventKind::OutboxFetched: svc->drain_outbox(payload.at("count").get<std::size_t>(), e.at); break;
        case EventKind::Configured:
        case EventKind::OutboundQueued:
        case EventKind::OrderOpened: corrupt(e.seq, "derived event without a preceding command");
      }
    } catch (const Error& err) {
      if (err.code() == Errc::CorruptLog) throw;
      corrupt(e.seq, err.what());
    } catch (const json::exception& err) {
      corrupt(e.seq, err.what());
    }
    verify();
  }
  if (verified != log.size()) corrupt(static_cast<std::int64_t>(verified) + 1, "log has unexplained events");
  return svc;
}

std::unique_ptr<Service> Service::restore(std::istream& log) { return restore(EventLog::read(log)); }

void Service::attach_log_file(const std::filesystem::path& path) {
  std::lock_guard lock(mu_);
  log_.attach_file(path);
}

std::vector<Event> Service::events() const {
  std::lock_guard lock(mu_);
  return log_.events();
}

std::vector<OutboxEntry> Service::outbox() const {
  std::lock_guard lock(mu_);
  return outbox_;
}

std::vector<DeadLetter> Service::dead_letters() const {
  std::lock_guard lock(mu_);
  return dead_letters_;
}

}  // namespace materna
