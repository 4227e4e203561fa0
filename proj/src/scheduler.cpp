#include "materna/scheduler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "materna/errors.hpp"
#include "materna/text.hpp"

namespace materna {

std::optional<BloodPressure> parse_blood_pressure(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto sys = text::parse_uint(s.substr(0, slash), 3);
  auto dia = text::parse_uint(s.substr(slash + 1), 3);
  if (!sys || !dia || *sys < 20 || *sys > 300 || *dia < 20 || *dia > 300) return std::nullopt;
  return BloodPressure{static_cast<int>(*sys), static_cast<int>(*dia)};
}

std::string format_blood_pressure(const BloodPressure& bp) {
  return std::to_string(bp.systolic) + '/' + std::to_string(bp.diastolic);
}

std::string_view to_string(Advisor a) noexcept {
  switch (a) {
    case Advisor::Server: return "Server";
    case Advisor::MD: return "MD";
    case Advisor::Admin: return "Admin";
  }
  return "?";
}

std::optional<Advisor> advisor_from_string(std::string_view s) noexcept {
  if (s == "Server") return Advisor::Server;
  if (s == "MD") return Advisor::MD;
  if (s == "Admin") return Advisor::Admin;
  return std::nullopt;
}

std::string_view to_string(AdviceType t) noexcept {
  return t == AdviceType::Normal ? "Normal" : "Other";
}

AdviceTemplates AdviceTemplates::parse(std::string_view document) {
  AdviceTemplates out;
  std::array<bool, 3> seen{};
  std::size_t lineno = 0;
  for (auto raw : text::split(document, '\n')) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (text::trim(raw).empty()) continue;
    const std::string where = "advice templates line " + std::to_string(lineno);
    if (raw.size() < 3 || raw[1] != '|' || raw[0] < '1' || raw[0] > '3')
      throw Error(Errc::BadTemplates, where + ": expected '<1|2|3>|<text>'");
    const auto idx = static_cast<std::size_t>(raw[0] - '1');
    const auto body = raw.substr(2);
    if (!text::is_wire_text(body)) throw Error(Errc::BadTemplates, where + ": text not sendable");
    if (text::utf8_length(body) > msg::kAdviceTextMax)
      throw Error(Errc::BadTemplates, where + ": text exceeds 250 characters");
    if (seen[idx]) throw Error(Errc::BadTemplates, where + ": duplicate trimester");
    seen[idx] = true;
    out.text[idx] = std::string(body);
  }
  for (bool s : seen)
    if (!s) throw Error(Errc::BadTemplates, "advice templates must define trimesters 1, 2 and 3");
  return out;
}

AdviceTemplates AdviceTemplates::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::BadTemplates, "cannot open advice templates " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

AdviceTemplates AdviceTemplates::defaults() {
  return {{
      "First trimester: take folic acid every day, avoid smoking and alcohol, and keep every "
      "review date at your care centre.",
      "Second trimester: eat iron-rich food, walk daily, and tell your care centre about swelling, "
      "headaches or blurred vision.",
      "Third trimester: bleeding, strong pain or less baby movement means send SOS at once. Plan "
      "your delivery with your care centre.",
  }};
}

int trimester_of(int week) {
  if (week < 1 || week > kMaxGestationalWeek)
    throw Error(Errc::BadWeek, "gestational week " + std::to_string(week) + " outside [1, 45]");
  if (week <= 13) return 1;
  if (week <= 27) return 2;
  return 3;
}

Scheduler::Scheduler(Registry& registry, AdviceTemplates templates, SchedulerSettings settings)
    : registry_(registry), templates_(std::move(templates)), settings_(settings) {}

void Scheduler::on_registered(const WomanRecord& woman) {
  std::lock_guard lock(mu_);
  const Date intake = day_of(woman.registered_at) + std::chrono::days{settings_.first_review_days};
  charts_.insert_or_assign(woman.phone, Chart{.phone = woman.phone,
                                              .id_code = woman.id_code,
                                              .active = true,
                                              .intake = Appointment{0, intake, false, false, 0},
                                              .reviews = {},
                                              .last_advised_trimester = std::nullopt});
}

void Scheduler::on_released(const PhoneId& phone) {
  std::lock_guard lock(mu_);
  if (auto it = charts_.find(phone); it != charts_.end()) it->second.active = false;
}

Scheduler::Chart& Scheduler::active_chart(const PhoneId& phone) {
  auto it = charts_.find(phone);
  if (it == charts_.end() || !it->second.active)
    throw Error(Errc::UnknownWoman, "no active registration for " + phone.str());
  return it->second;
}

ReviewRecord Scheduler::record_review(const PhoneId& phone, const MdEntry& entry, Timestamp now) {
  std::lock_guard lock(mu_);
  Chart& chart = active_chart(phone);
  const Date today = day_of(now);
  const int seq = static_cast<int>(chart.reviews.size()) + 1;

  if (entry.expected_seq && *entry.expected_seq != seq)
    throw Error(Errc::SeqConflict, "stale review entry: expected seq " +
                                       std::to_string(*entry.expected_seq) + ", next is " +
                                       std::to_string(seq));
  if (entry.next_review <= today)
    throw Error(Errc::BadNextReview, "next review " + format_date(entry.next_review) +
                                         " must be after " + format_date(today));
  trimester_of(entry.gestational_week);
  if (entry.weight_kg && (!std::isfinite(*entry.weight_kg) || *entry.weight_kg <= 0.0 ||
                          *entry.weight_kg > 400.0))
    throw Error(Errc::InvalidArgument, "weight_kg out of range");

  PrimeInfo prime;
  if (seq == 1) {
    const auto w = registry_.lookup(phone);
    prime = {w.name, w.age, w.home_location, w.assigned_facility};
  } else {
    prime = chart.reviews.back().prime_info;
  }
  ReviewRecord r{.phone = phone,
                 .seq = seq,
                 .prime_info = std::move(prime),
                 .review_date = today,
                 .gestational_week = entry.gestational_week,
                 .weight_kg = entry.weight_kg,
                 .blood_pressure = entry.blood_pressure,
                 .notes = entry.notes,
                 .next = Appointment{seq, entry.next_review, false, false, 0}};

  if (entry.conditions) registry_.set_conditions(phone, *entry.conditions);
  registry_.set_gestation_start(phone, today - std::chrono::days{7 * (entry.gestational_week - 1)});
  chart.reviews.push_back(r);
  return r;
}

std::vector<msg::Remind> Scheduler::tick(Date today) {
  std::lock_guard lock(mu_);
  std::vector<msg::Remind> out;
  for (auto& [phone, chart] : charts_) {
    if (!chart.active) continue;
    Appointment& appt = chart.pending();
    if (appt.confirmed || appt.reminder_sent) continue;
    const long days_until = days_between(today, appt.date);
    // [latest, earliest] is the regular window; [0, latest) catches up after downtime.
    if (days_until >= 0 && days_until <= settings_.remind_earliest_days) {
      appt.reminder_sent = true;
      out.push_back(msg::Remind{phone, appt.date});
    }
  }
  return out;
}

Appointment Scheduler::reschedule(const msg::ChangeReview& change, Timestamp now) {
  std::lock_guard lock(mu_);
  Chart& chart = active_chart(change.phone);
  Appointment& appt = chart.pending();
  const Date today = day_of(now);
  if (appt.reschedules >= settings_.max_reschedules)
    throw Error(Errc::NoExcuse, "review already rescheduled once");
  if (change.new_date <= today) throw Error(Errc::NoExcuse, "new review date must be in the future");
  if (change.new_date > appt.date + std::chrono::days{settings_.max_postpone_days})
    throw Error(Errc::NoExcuse, "postponement beyond 14 days");
  appt.date = change.new_date;
  appt.reschedules += 1;
  appt.reminder_sent = false;
  appt.confirmed = false;
  return appt;
}

Appointment Scheduler::confirm(const msg::Confirm& confirmation) {
  std::lock_guard lock(mu_);
  Chart& chart = active_chart(confirmation.phone);
  Appointment& appt = chart.pending();
  if (appt.date != confirmation.date)
    throw Error(Errc::DateMismatch, "pending review is " + format_date(appt.date) + ", not " +
                                        format_date(confirmation.date));
  appt.confirmed = true;
  return appt;
}

std::optional<int> Scheduler::trimester_locked(const Chart& c, Date today) const {
  if (c.reviews.empty()) return std::nullopt;
  const auto& latest = c.reviews.back();
  const long elapsed = days_between(latest.review_date, today);
  const long weeks = elapsed >= 0 ? elapsed / 7 : -((-elapsed + 6) / 7);
  const long week = std::clamp<long>(latest.gestational_week + weeks, 1, kMaxGestationalWeek);
  return trimester_of(static_cast<int>(week));
}

std::vector<IssuedAdvice> Scheduler::advice_due(Date today) {
  std::lock_guard lock(mu_);
  std::vector<IssuedAdvice> out;
  for (auto& [phone, chart] : charts_) {
    if (!chart.active) continue;
    const auto tri = trimester_locked(chart, today);
    if (!tri || chart.last_advised_trimester == tri) continue;
    chart.last_advised_trimester = tri;
    const auto& body = templates_.for_trimester(*tri);
    AdviceRecord rec{chart.id_code, phone, *tri, true, AdviceType::Normal, Advisor::Server, body};
    ledger_.push_back(rec);
    out.push_back({msg::Advice{phone, *tri, body}, std::move(rec)});
  }
  return out;
}

std::vector<IssuedAdvice> Scheduler::compose_advice(Advisor who, const std::optional<PhoneId>& target,
                                                    const std::string& body, Date today) {
  if (who == Advisor::Server)
    throw Error(Errc::InvalidArgument, "server advice is issued by the scheduler only");
  if (text::is_valid_utf8(body) && text::utf8_length(body) > msg::kAdviceTextMax)
    throw Error(Errc::AdviceTooLong, "advice text exceeds 250 characters");
  if (!text::is_wire_text(body)) throw Error(Errc::BadText, "advice text must be non-empty without '|'");

  std::lock_guard lock(mu_);
  std::vector<Chart*> targets;
  if (target) {
    targets.push_back(&active_chart(*target));
  } else {
    for (auto& [_, c] : charts_)
      if (c.active) targets.push_back(&c);
  }
  std::vector<IssuedAdvice> out;
  for (Chart* c : targets) {
    // Without a recorded week the trimester field falls back to 1.
    const int tri = trimester_locked(*c, today).value_or(1);
    AdviceRecord rec{c->id_code, c->phone, tri, true, AdviceType::Other, who, body};
    ledger_.push_back(rec);
    out.push_back({msg::Advice{c->phone, tri, body}, std::move(rec)});
  }
  return out;
}

std::vector<ReviewRecord> Scheduler::reviews(const PhoneId& phone) const {
  std::lock_guard lock(mu_);
  auto it = charts_.find(phone);
  if (it == charts_.end()) throw Error(Errc::UnknownWoman, "unknown woman " + phone.str());
  return it->second.reviews;
}

Appointment Scheduler::pending(const PhoneId& phone) const {
  std::lock_guard lock(mu_);
  auto it = charts_.find(phone);
  if (it == charts_.end()) throw Error(Errc::UnknownWoman, "unknown woman " + phone.str());
  return it->second.pending();
}

std::optional<int> Scheduler::current_trimester(const PhoneId& phone, Date today) const {
  std::lock_guard lock(mu_);
  auto it = charts_.find(phone);
  if (it == charts_.end()) throw Error(Errc::UnknownWoman, "unknown woman " + phone.str());
  return trimester_locked(it->second, today);
}

std::vector<AdviceRecord> Scheduler::ledger() const {
  std::lock_guard lock(mu_);
  return ledger_;
}

std::vector<Scheduler::ChartView> Scheduler::charts() const {
  std::lock_guard lock(mu_);
  std::vector<ChartView> out;
  for (const auto& [phone, c] : charts_)
    out.push_back({phone, c.active, c.pending(), c.reviews, c.last_advised_trimester});
  return out;
}

}  // namespace materna
