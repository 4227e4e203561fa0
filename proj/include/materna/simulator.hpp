#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "materna/event_log.hpp"
#include "materna/service.hpp"

// Device simulator standing in for the phone network.
//
// Scenario files hold one step per line, `@<virtual-minutes> <body>`, with
// minutes non-decreasing. A body is either a raw inbound wire line or one of
//
//   TICK                                   run reminders and server advice
//   REVIEW <phone> <week> <date|+days> [Cond,Cond]   MD review entry
//   ADVICE <MD|Admin> <phone|ALL> <text>   operator advice
//   CLOSE <order_id> <outcome>             close a rescue order
//   RELEASE <facility_id> <phone>          free a registration slot
//   DRAIN <n>                              fetch from the outbox
//   POPULATION <women> <weeks>             seeded synthetic traffic
//   CHGREL/CNFREL <phone> <day>            CHG/CNF dated <day> days after the run start
//
// Blank lines and lines starting with `#` are ignored.
namespace materna::sim {

struct Step {
  long minute = 0;
  std::size_t line_no = 0;  // 0 for generated steps
  std::string body;
};

/// Throws Error(BadScenario) naming the line.
std::vector<Step> parse_scenario(std::string_view document);

/// Synthetic traffic for `women` registrants over `weeks`, starting at
/// `start_minute`, placed around `facilities`. Draws only raw engine output,
/// so a seed yields the same steps on every platform.
std::vector<Step> generate_population(int women, int weeks, long start_minute,
                                      const std::vector<Facility>& facilities, std::mt19937_64& rng);

/// Replaces POPULATION directives with generated steps, ordered by minute.
std::vector<Step> expand(const std::vector<Step>& steps, const std::vector<Facility>& facilities,
                         std::uint64_t seed);

struct Report {
  long inbound_lines = 0;
  long inbound_rejected = 0;
  long registrations_ok = 0;
  long registrations_rejected = 0;
  long reminders_sent = 0;
  long advice_server_t1 = 0;
  long advice_server_t2 = 0;
  long advice_server_t3 = 0;
  long advice_md = 0;
  long advice_admin = 0;
  long reviews_recorded = 0;
  long reschedules_accepted = 0;
  long reschedules_refused = 0;
  long confirmations_ok = 0;
  long confirmations_refused = 0;
  long sos_orders = 0;
  long sos_car = 0;
  long sos_boat = 0;
  long sos_heli = 0;
  long sos_refused = 0;
  long orders_closed = 0;
  long releases = 0;
  long messages_inbound = 0;
  long messages_outbound = 0;

  long messages_total() const { return messages_inbound + messages_outbound; }
  /// `key=value` lines in fixed order.
  std::string render() const;
  friend bool operator==(const Report&, const Report&) = default;
};

/// Drives `service` (which must run on a virtual clock) through the steps,
/// counting outcomes as they happen.
Report run(const std::vector<Step>& steps, Service& service);

/// Recomputes the same counters from an event log alone.
Report summarize(const std::vector<Event>& log);

}  // namespace materna::sim
