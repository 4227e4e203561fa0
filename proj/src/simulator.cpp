#include "materna/simulator.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <optional>
#include <sstream>

#include "materna/errors.hpp"
#include "materna/text.hpp"

namespace materna::sim {

namespace {

[[noreturn]] void bad(std::size_t line_no, const std::string& why) {
  throw Error(Errc::BadScenario, "scenario line " + std::to_string(line_no) + ": " + why);
}

std::pair<std::string_view, std::string_view> head_tail(std::string_view s) {
  const auto sp = s.find(' ');
  if (sp == std::string_view::npos) return {s, {}};
  return {s.substr(0, sp), s.substr(sp + 1)};
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  for (auto w : text::split(s, ' '))
    if (!w.empty()) out.push_back(w);
  return out;
}

// Uniform integer in [lo, hi] from raw engine output.
long draw(std::mt19937_64& rng, long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(rng() % span);
}

double draw_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool chance(std::mt19937_64& rng, int percent) { return draw(rng, 0, 99) < percent; }

constexpr std::array<std::string_view, 12> kNames{"Sara",  "Shilan", "Avin",  "Lana",  "Dilan", "Rozhan",
                                                  "Hana",  "Zhino",  "Nazdar", "Bahar", "Shno",  "Tara"};
constexpr std::array<std::string_view, 4> kConditions{"Hypertension", "Diabetes", "Cardiac", "Asthma"};

constexpr long kDay = 24 * 60;

}  // namespace

std::vector<Step> parse_scenario(std::string_view document) {
  std::vector<Step> out;
  long last = 0;
  std::size_t line_no = 0;
  for (auto raw : text::split(document, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (text::trim(raw).empty() || raw.front() == '#') continue;
    if (raw.front() != '@') bad(line_no, "expected '@<minutes> <body>'");
    auto [stamp, body] = head_tail(raw.substr(1));
    auto minute = text::parse_uint(stamp, 9);
    if (!minute) bad(line_no, "bad minute '" + std::string(stamp) + "'");
    if (*minute < last) bad(line_no, "minutes must not decrease");
    if (body.empty()) bad(line_no, "missing body");
    last = static_cast<long>(*minute);

    const auto [verb, args] = head_tail(body);
    const auto w = words(args);
    auto need = [&, verb = verb](std::size_t n) {
      if (w.size() < n) bad(line_no, std::string(verb) + " needs " + std::to_string(n) + " arguments");
    };
    if (verb == "TICK") {
      if (!w.empty()) bad(line_no, "TICK takes no arguments");
    } else if (verb == "REVIEW") {
      need(3);
      if (w.size() > 4) bad(line_no, "REVIEW takes at most 4 arguments");
    } else if (verb == "ADVICE" || verb == "CLOSE") {
      need(verb == "ADVICE" ? 3 : 1);
    } else if (verb == "RELEASE" || verb == "POPULATION") {
      need(2);
      if (w.size() > 2) bad(line_no, std::string(verb) + " takes 2 arguments");
    } else if (verb == "DRAIN") {
      need(1);
    }
    out.push_back(Step{last, line_no, std::string(body)});
  }
  return out;
}

std::vector<Step> generate_population(int women, int weeks, long start, const std::vector<Facility>& facilities,
                                      std::mt19937_64& rng) {
  double lat_lo = 36.10, lat_hi = 36.28, lon_lo = 43.92, lon_hi = 44.10;
  if (!facilities.empty()) {
    lat_lo = lon_lo = 1e9;
    lat_hi = lon_hi = -1e9;
    for (const auto& f : facilities) {
      lat_lo = std::min(lat_lo, f.location.lat_deg());
      lat_hi = std::max(lat_hi, f.location.lat_deg());
      lon_lo = std::min(lon_lo, f.location.lon_deg());
      lon_hi = std::max(lon_hi, f.location.lon_deg());
    }
    lat_lo = std::max(-89.9, lat_lo - 0.05);
    lat_hi = std::min(89.9, lat_hi + 0.05);
    lon_lo = std::max(-179.9, lon_lo - 0.05);
    lon_hi = std::min(179.9, lon_hi + 0.05);
  }

  const long horizon = start + static_cast<long>(weeks) * 7 * kDay;
  std::vector<Step> out;
  auto emit = [&](long minute, std::string body) {
    if (minute <= horizon) out.push_back(Step{minute, 0, std::move(body)});
  };

  const long phone_base = draw(rng, 100000000, 799999999);
  for (int i = 0; i < women; ++i) {
    char phone[16];
    std::snprintf(phone, sizeof phone, "07%09ld", phone_base + i);
    const double lat = lat_lo + (lat_hi - lat_lo) * draw_unit(rng);
    const double lon = lon_lo + (lon_hi - lon_lo) * draw_unit(rng);
    const std::string where = text::format_fixed(lat, 6) + '|' + text::format_fixed(lon, 6);
    const long reg_day = draw(rng, 0, 6);
    const long reg_at = start + reg_day * kDay + draw(rng, 8 * 60, 18 * 60);
    const auto name = kNames[static_cast<std::size_t>(draw(rng, 0, kNames.size() - 1))];
    const long age = chance(rng, 2) ? 8 : draw(rng, 16, 44);

    if (chance(rng, 1)) emit(reg_at, "REG|" + std::string(phone) + '|' + where + '|' + std::string(name));
    emit(reg_at, "REG|" + std::string(phone) + '|' + where + '|' + std::string(name) + '|' + std::to_string(age));
    if (chance(rng, 2)) emit(reg_at + 30, "REG|" + std::string(phone) + '|' + where + '|' + std::string(name) + "|30");

    // Reviews every four weeks (every two from week 28), each booking the next.
    const long first_day = reg_day + 14;
    const long first_week = draw(rng, 4, 20);
    std::string conditions;
    if (chance(rng, 10)) conditions = std::string(kConditions[static_cast<std::size_t>(draw(rng, 0, 3))]);
    long appt_day = first_day;
    for (;;) {
      const long week = first_week + (appt_day - first_day) / 7;
      if (week > 40) break;
      const long appt_at = start + appt_day * kDay;
      long actual_day = appt_day;
      if (chance(rng, 10)) {
        actual_day = appt_day + draw(rng, 1, 10);
        emit(appt_at - 5 * kDay + 600, "CHGREL " + std::string(phone) + ' ' + std::to_string(actual_day));
      } else if (chance(rng, 60)) {
        emit(appt_at - 4 * kDay + 600, "CNFREL " + std::string(phone) + ' ' + std::to_string(appt_day));
      }
      const long actual_week = first_week + (actual_day - first_day) / 7;
      const long gap = actual_week >= 28 ? 14 : 28;
      std::string review =
          "REVIEW " + std::string(phone) + ' ' + std::to_string(std::min(actual_week, 45L)) + " +" + std::to_string(gap);
      if (!conditions.empty()) review += ' ' + conditions;
      emit(start + actual_day * kDay + 9 * 60, review);
      appt_day = actual_day + gap;
    }
    if (chance(rng, 3)) {
      const long sos_at = start + draw(rng, reg_day + 1, static_cast<long>(weeks) * 7) * kDay + draw(rng, 0, kDay - 1);
      emit(sos_at, "SOS|" + std::string(phone) + '|' + where);
    }
  }
  for (long d = 0; d < static_cast<long>(weeks) * 7; ++d) emit(start + d * kDay + 7 * 60, "TICK");
  std::stable_sort(out.begin(), out.end(), [](const Step& a, const Step& b) { return a.minute < b.minute; });
  return out;
}

std::vector<Step> expand(const std::vector<Step>& steps, const std::vector<Facility>& facilities,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Step> out;
  for (const auto& s : steps) {
    const auto [verb, args] = head_tail(s.body);
    if (verb != "POPULATION") {
      out.push_back(s);
      continue;
    }
    const auto w = words(args);
    auto n = text::parse_uint(w.at(0), 6);
    auto weeks = text::parse_uint(w.at(1), 3);
    if (!n || !weeks || *weeks < 1) bad(s.line_no, "POPULATION needs <women> <weeks>");
    auto gen = generate_population(static_cast<int>(*n), static_cast<int>(*weeks), s.minute, facilities, rng);
    out.insert(out.end(), gen.begin(), gen.end());
  }
  std::stable_sort(out.begin(), out.end(), [](const Step& a, const Step& b) { return a.minute < b.minute; });
  return out;
}

std::string Report::render() const {
  std::ostringstream o;
  o << "inbound_lines=" << inbound_lines << '\n'
    << "inbound_rejected=" << inbound_rejected << '\n'
    << "registrations_ok=" << registrations_ok << '\n'
    << "registrations_rejected=" << registrations_rejected << '\n'
    << "reminders_sent=" << reminders_sent << '\n'
    << "advice_server_t1=" << advice_server_t1 << '\n'
    << "advice_server_t2=" << advice_server_t2 << '\n'
    << "advice_server_t3=" << advice_server_t3 << '\n'
    << "advice_md=" << advice_md << '\n'
    << "advice_admin=" << advice_admin << '\n'
    << "reviews_recorded=" << reviews_recorded << '\n'
    << "reschedules_accepted=" << reschedules_accepted << '\n'
    << "reschedules_refused=" << reschedules_refused << '\n'
    << "confirmations_ok=" << confirmations_ok << '\n'
    << "confirmations_refused=" << confirmations_refused << '\n'
    << "sos_orders=" << sos_orders << '\n'
    << "sos_car=" << sos_car << '\n'
    << "sos_boat=" << sos_boat << '\n'
    << "sos_heli=" << sos_heli << '\n'
    << "sos_refused=" << sos_refused << '\n'
    << "orders_closed=" << orders_closed << '\n'
    << "releases=" << releases << '\n'
    << "messages_inbound=" << messages_inbound << '\n'
    << "messages_outbound=" << messages_outbound << '\n'
    << "messages_total=" << messages_total() << '\n';
  return o.str();
}

namespace {

void count_rescue(Report& r, Vehicle v) {
  ++r.sos_orders;
  switch (v) {
    case Vehicle::Car: ++r.sos_car; break;
    case Vehicle::LifeBoat: ++r.sos_boat; break;
    case Vehicle::Helicopter: ++r.sos_heli; break;
  }
}

void count_tick_output(Report& r, const msg::Outbound& m) {
  if (std::holds_alternative<msg::Remind>(m)) {
    ++r.reminders_sent;
  } else if (const auto* a = std::get_if<msg::Advice>(&m)) {
    if (a->trimester == 1) ++r.advice_server_t1;
    else if (a->trimester == 2) ++r.advice_server_t2;
    else ++r.advice_server_t3;
  }
}

long addressed(const std::vector<msg::Outbound>& out) {
  return static_cast<long>(std::count_if(out.begin(), out.end(), [](const msg::Outbound& m) {
    return msg::recipient(m).has_value();
  }));
}

}  // namespace

Report run(const std::vector<Step>& steps, Service& service) {
  auto* clock = service.virtual_clock();
  if (!clock) throw Error(Errc::InvalidArgument, "the simulator needs a virtual clock");
  const Timestamp base = clock->now();
  const Date base_day = day_of(base);
  Report r;

  auto inbound = [&](std::string_view line, Timestamp now) {
    ++r.inbound_lines;
    ++r.messages_inbound;
    std::optional<msg::Inbound> parsed;
    try {
      parsed = msg::parse_inbound(line);
    } catch (const ParseError&) {
    }
    const auto out = service.ingest(line, now);
    r.messages_outbound += addressed(out);
    if (!parsed) {
      ++r.inbound_rejected;
      return;
    }
    const bool refused = !out.empty() && std::holds_alternative<msg::Err>(out.front());
    switch (parsed->index()) {
      case 0: refused ? ++r.registrations_rejected : ++r.registrations_ok; break;
      case 1:
        if (refused) ++r.sos_refused;
        else count_rescue(r, std::get<msg::Rescue>(out.front()).vehicle);
        break;
      case 2: refused ? ++r.reschedules_refused : ++r.reschedules_accepted; break;
      case 3: refused ? ++r.confirmations_refused : ++r.confirmations_ok; break;
    }
  };

  for (const auto& s : steps) {
    const Timestamp now = base + std::chrono::minutes{s.minute};
    clock->set(now);
    const auto [verb, args] = head_tail(s.body);
    const auto w = words(args);
    try {
      if (verb == "TICK") {
        const auto out = service.tick(now);
        r.messages_outbound += addressed(out);
        for (const auto& m : out) count_tick_output(r, m);
      } else if (verb == "REVIEW") {
        MdEntry e;
        auto week = text::parse_uint(w[1], 2);
        if (!week) bad(s.line_no, "bad gestational week");
        e.gestational_week = static_cast<int>(*week);
        if (w[2].starts_with('+')) {
          auto days = text::parse_uint(w[2].substr(1), 4);
          if (!days) bad(s.line_no, "bad +days");
          e.next_review = day_of(now) + std::chrono::days{*days};
        } else {
          auto d = parse_date(w[2]);
          if (!d) bad(s.line_no, "bad next review date");
          e.next_review = *d;
        }
        if (w.size() == 4) {
          ConditionSet c;
          for (auto name : text::split(w[3], ',')) {
            auto cond = condition_from_string(name);
            if (!cond) bad(s.line_no, "unknown condition '" + std::string(name) + "'");
            c.insert(*cond);
          }
          e.conditions = c;
        }
        auto phone = PhoneId::parse(w[0]);
        if (!phone) bad(s.line_no, "bad phone");
        service.record_review(*phone, e, now);
        ++r.reviews_recorded;
      } else if (verb == "ADVICE") {
        auto who = advisor_from_string(w[0]);
        if (!who || *who == Advisor::Server) bad(s.line_no, "ADVICE needs MD or Admin");
        std::optional<PhoneId> target;
        if (w[1] != "ALL") {
          target = PhoneId::parse(w[1]);
          if (!target) bad(s.line_no, "bad phone");
        }
        // text is everything after the target word
        const auto text_at = args.find(w[1]) + w[1].size() + 1;
        const auto out = service.compose_advice(*who, target, std::string(args.substr(text_at)), now);
        r.messages_outbound += addressed(out);
        (*who == Advisor::MD ? r.advice_md : r.advice_admin) += static_cast<long>(out.size());
      } else if (verb == "CLOSE") {
        auto id = text::parse_uint(w[0], 12);
        if (!id) bad(s.line_no, "bad order id");
        const auto outcome_at = args.find(w[0]) + w[0].size();
        service.close_order(*id, std::string(text::trim(args.substr(outcome_at))), now);
        ++r.orders_closed;
      } else if (verb == "RELEASE") {
        auto fid = text::parse_uint(w[0], 9);
        auto phone = PhoneId::parse(w[1]);
        if (!fid || !phone) bad(s.line_no, "RELEASE needs <facility_id> <phone>");
        service.release_slot(static_cast<int>(*fid), *phone, now);
        ++r.releases;
      } else if (verb == "DRAIN") {
        auto n = text::parse_uint(w[0], 9);
        if (!n || *n < 1) bad(s.line_no, "bad DRAIN count");
        service.drain_outbox(static_cast<std::size_t>(*n), now);
      } else if (verb == "CHGREL" || verb == "CNFREL") {
        // Generator-internal: date given as a day offset from the run's base day.
        auto day = text::parse_uint(w.at(1), 6);
        if (!day) bad(s.line_no, "bad day offset");
        const auto date = format_date(base_day + std::chrono::days{*day});
        inbound((verb == "CHGREL" ? "CHG|" : "CNF|") + std::string(w.at(0)) + '|' + date, now);
      } else {
        inbound(s.body, now);
      }
    } catch (const Error& e) {
      // Refused operator actions leave no trace in the log.
      if (e.code() == Errc::BadScenario) throw;
    }
  }
  return r;
}

Report summarize(const std::vector<Event>& log) {
  Report r;
  enum class Cmd { None, Bad, Reg, Sos, Chg, Cnf, Tick, AdviceMd, AdviceAdmin, Other };
  Cmd cmd = Cmd::None;
  bool refused = false;

  auto finish = [&] {
    if (cmd == Cmd::Chg) refused ? ++r.reschedules_refused : ++r.reschedules_accepted;
    if (cmd == Cmd::Cnf) refused ? ++r.confirmations_refused : ++r.confirmations_ok;
    if (cmd == Cmd::Reg && refused) ++r.registrations_rejected;
    if (cmd == Cmd::Sos && refused) ++r.sos_refused;
    cmd = Cmd::None;
    refused = false;
  };

  for (const auto& e : log) {
    switch (e.kind) {
      case EventKind::InboundAccepted: {
        finish();
        ++r.inbound_lines;
        ++r.messages_inbound;
        const auto verb = e.payload.substr(0, e.payload.find('|'));
        cmd = verb == "REG" ? Cmd::Reg : verb == "SOS" ? Cmd::Sos : verb == "CHG" ? Cmd::Chg : Cmd::Cnf;
        break;
      }
      case EventKind::InboundRejected:
        finish();
        ++r.inbound_lines;
        ++r.messages_inbound;
        ++r.inbound_rejected;
        cmd = Cmd::Bad;
        break;
      case EventKind::ClockTick: finish(); cmd = Cmd::Tick; break;
      case EventKind::AdviceComposed:
        finish();
        cmd = e.payload.find("\"who\":\"MD\"") != std::string::npos ? Cmd::AdviceMd : Cmd::AdviceAdmin;
        break;
      case EventKind::ReviewRecorded: finish(); ++r.reviews_recorded; cmd = Cmd::Other; break;
      case EventKind::OrderClosed: finish(); ++r.orders_closed; cmd = Cmd::Other; break;
      case EventKind::SlotReleased: finish(); ++r.releases; cmd = Cmd::Other; break;
      case EventKind::Configured:
      case EventKind::OutboxFetched: finish(); cmd = Cmd::Other; break;
      case EventKind::OrderOpened: break;
      case EventKind::OutboundQueued: {
        ++r.messages_outbound;
        const auto out = msg::parse_outbound(e.payload);
        if (std::holds_alternative<msg::Err>(out)) refused = true;
        switch (cmd) {
          case Cmd::Reg:
            if (std::holds_alternative<msg::Assign>(out)) ++r.registrations_ok;
            break;
          case Cmd::Sos:
            if (const auto* rescue = std::get_if<msg::Rescue>(&out)) count_rescue(r, rescue->vehicle);
            break;
          case Cmd::Tick: count_tick_output(r, out); break;
          case Cmd::AdviceMd: ++r.advice_md; break;
          case Cmd::AdviceAdmin: ++r.advice_admin; break;
          default: break;
        }
        break;
      }
    }
  }
  finish();
  return r;
}

}  // namespace materna::sim
