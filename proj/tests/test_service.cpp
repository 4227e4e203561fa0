#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "materna/errors.hpp"
#include "materna/service.hpp"
#include "materna/text.hpp"
#include "generators.hpp"
#include "support.hpp"

using namespace materna;
using namespace materna::testing;
using std::chrono::days;
using std::chrono::minutes;

namespace {

const std::string kReg = "REG|07504432147|36.190000|44.010000|Sara|27";
const PhoneId kPhone = PhoneId::from("07504432147");

ServiceSetup three_site_setup() {
  ServiceSetup s;
  s.facilities = three_site_facilities();
  return s;
}

std::vector<std::string> lines(const std::vector<msg::Outbound>& out) {
  std::vector<std::string> v;
  for (const auto& m : out) v.push_back(msg::encode_outbound(m));
  return v;
}

std::vector<std::string> kinds(const std::vector<Event>& events, std::size_t from) {
  std::vector<std::string> v;
  for (std::size_t i = from; i < events.size(); ++i) v.emplace_back(to_string(events[i].kind));
  return v;
}

}  // namespace

TEST(Service, RegistrationQueuesAssign) {
  Service s(three_site_setup());
  const auto out = s.ingest(kReg);
  EXPECT_EQ(lines(out), std::vector<std::string>{"ASSIGN|07504432147|3|Maternity Hospital|3.7"});
  EXPECT_EQ(kinds(s.events(), 1), (std::vector<std::string>{"InboundAccepted", "OutboundQueued"}));
  const auto drained = s.drain_outbox(10);
  ASSERT_EQ(drained.size(), 1u);
  EXPECT_EQ(drained[0].line, "ASSIGN|07504432147|3|Maternity Hospital|3.7");
  EXPECT_TRUE(s.drain_outbox(10).empty());
}

TEST(Service, GarbageBecomesDeadLetter) {
  Service s(three_site_setup());
  const auto out = s.ingest(std::string("\x01\xff|garbage", 10));
  EXPECT_EQ(lines(out), std::vector<std::string>{"ERR|UNKNOWN|BADMSG"});
  EXPECT_EQ(kinds(s.events(), 1), std::vector<std::string>{"InboundRejected"});
  ASSERT_EQ(s.dead_letters().size(), 1u);
  EXPECT_EQ(s.dead_letters()[0].reply, "ERR|UNKNOWN|BADMSG");
  EXPECT_TRUE(s.outbox().empty());

  const auto salvaged = s.ingest("SOS|07504432147|91.000000|44.000000");
  EXPECT_EQ(lines(salvaged), std::vector<std::string>{"ERR|07504432147|BADMSG"});
  EXPECT_EQ(s.outbox().size(), 1u);
}

TEST(Service, WireErrors) {
  Service s(three_site_setup());
  s.ingest(kReg);
  EXPECT_EQ(lines(s.ingest(kReg)), std::vector<std::string>{"ERR|07504432147|DUP"});
  EXPECT_EQ(lines(s.ingest("REG|0750000001|36.190000|44.010000|Sara|9")),
            std::vector<std::string>{"ERR|0750000001|BADAGE"});
  EXPECT_EQ(lines(s.ingest("SOS|0750000002|36.190000|44.010000")),
            std::vector<std::string>{"ERR|0750000002|UNREG"});
  EXPECT_EQ(lines(s.ingest("CHG|07504432147|2013-01-30")), std::vector<std::string>{"ERR|07504432147|NOEXCUSE"});
  EXPECT_EQ(lines(s.ingest("CNF|07504432147|2013-01-30")), std::vector<std::string>{"ERR|07504432147|BADMSG"});
  EXPECT_TRUE(s.ingest("CHG|07504432147|2012-11-20").empty());
  EXPECT_TRUE(s.ingest("CNF|07504432147|2012-11-20").empty());
}

TEST(Service, NoCapacity) {
  auto setup = three_site_setup();
  for (auto& f : setup.facilities) f.registered_count = f.capacity;
  Service s(setup);
  EXPECT_EQ(lines(s.ingest(kReg)), std::vector<std::string>{"ERR|07504432147|NOCAP"});
}

TEST(Service, SosOpensOrder) {
  Service s(three_site_setup());
  s.ingest(kReg);
  EXPECT_EQ(lines(s.ingest("SOS|07504432147|36.190000|44.010000")),
            std::vector<std::string>{"RESCUE|07504432147|CAR|6"});
  EXPECT_EQ(kinds(s.events(), 3),
            (std::vector<std::string>{"InboundAccepted", "OrderOpened", "OutboundQueued"}));
  EXPECT_EQ(s.dispatcher().orders().size(), 1u);
}

TEST(Service, TickSendsReminderInWindow) {
  auto clock = std::make_shared<VirtualClock>(Timestamp{make_date(2012, 11, 1)});
  Service s(three_site_setup(), clock);
  s.ingest(kReg);
  EXPECT_TRUE(s.tick(Timestamp{make_date(2012, 11, 7)}).empty());
  EXPECT_EQ(lines(s.tick(Timestamp{make_date(2012, 11, 8)})),
            std::vector<std::string>{"REMIND|07504432147|2012-11-15"});
}

TEST(Service, ReleasedWomanIsUnregistered) {
  Service s(three_site_setup());
  s.ingest(kReg);
  s.release_slot(3, kPhone, s.clock().now());
  EXPECT_EQ(lines(s.ingest("SOS|07504432147|36.190000|44.010000")),
            std::vector<std::string>{"ERR|07504432147|UNREG"});
  EXPECT_EQ(lines(s.ingest(kReg)), std::vector<std::string>{"ERR|07504432147|DUP"});
  EXPECT_EQ(s.registry().facility(3).registered_count, 20);
}

TEST(ServiceProperty, InterleavedDrainsDeliverEachMessageOnce) {
  std::mt19937_64 rng(61);
  auto setup = three_site_setup();
  for (auto& f : setup.facilities) f.capacity = 100000;
  Service s(setup);
  std::vector<std::string> drained;
  for (int i = 0; i < 2000; ++i) {
    if (rng() % 3 == 0) {
      for (const auto& e : s.drain_outbox(1 + rng() % 5)) drained.push_back(e.line);
    } else {
      s.ingest("REG|07" + std::to_string(100000000 + i) + "|36.190000|44.010000|N|" +
               std::to_string(uniform_int(rng, 5, 70)));
    }
  }
  for (const auto& e : s.drain_outbox(100000)) drained.push_back(e.line);
  std::vector<std::string> queued;
  for (const auto& e : s.outbox()) {
    EXPECT_EQ(e.state, Delivery::Fetched);
    queued.push_back(e.line);
  }
  EXPECT_EQ(drained, queued);
  std::vector<std::string> logged;
  for (const auto& e : s.events())
    if (e.kind == EventKind::OutboundQueued) logged.push_back(e.payload);
  EXPECT_EQ(logged, queued);
}

TEST(ServiceProperty, ConcurrentCallersSerialize) {
  auto setup = three_site_setup();
  setup.facilities = {Facility{1, "Only", "Z", GeoPoint(36.19, 44.01), 0, 10, {}}};
  Service s(setup);
  std::vector<std::thread> ts;
  for (int t = 0; t < 100; ++t)
    ts.emplace_back([&, t] { s.ingest("REG|07" + std::to_string(200000000 + t) + "|36.190000|44.010000|N|30"); });
  for (auto& t : ts) t.join();
  const auto ev = s.events();
  for (std::size_t i = 0; i < ev.size(); ++i) ASSERT_EQ(ev[i].seq, static_cast<std::int64_t>(i) + 1);
  EXPECT_EQ(s.registry().facility(1).registered_count, 10);
  auto restored = Service::restore(ev);
  EXPECT_EQ(restored->snapshot(), s.snapshot());
}

namespace {

// A mixed session touching every command kind.
void mixed_session(Service& s, std::mt19937_64& rng) {
  auto* clock = s.virtual_clock();
  std::vector<std::string> phones;
  for (int day = 0; day < 90; ++day) {
    for (int k = 0; k < 6; ++k) {
      clock->advance(minutes{uniform_int(rng, 1, 200)});
      const auto now = clock->now();
      const int r = uniform_int(rng, 0, 99);
      if (r < 25 || phones.empty()) {
        const std::string p = "07" + std::to_string(300000000 + rng() % 1000);
        s.ingest("REG|" + p + "|" + text::format_fixed(uniform(rng, 36.1, 36.3), 6) + "|" +
                 text::format_fixed(uniform(rng, 43.9, 44.1), 6) + "|Woman|" + std::to_string(uniform_int(rng, 8, 50)));
        phones.push_back(p);
      } else if (r < 35) {
        s.ingest(random_fuzz_line(rng));
      } else {
        const auto p = phones[rng() % phones.size()];
        const auto today = day_of(now);
        try {
          if (r < 50) {
            s.ingest("CNF|" + p + "|" + format_date(s.scheduler().pending(PhoneId::from(p)).date));
          } else if (r < 60) {
            s.ingest("CHG|" + p + "|" + format_date(today + days{uniform_int(rng, -1, 20)}));
          } else if (r < 75) {
            MdEntry e;
            e.gestational_week = uniform_int(rng, 1, 40);
            e.next_review = today + days{uniform_int(rng, 1, 40)};
            e.weight_kg = 60.5;
            e.notes = "ok";
            s.record_review(PhoneId::from(p), e, now);
          } else if (r < 80) {
            s.compose_advice(rng() % 2 ? Advisor::MD : Advisor::Admin,
                             rng() % 4 ? std::optional(PhoneId::from(p)) : std::nullopt, "Drink water.", now);
          } else if (r < 85) {
            s.ingest("SOS|" + p + "|36.200000|44.000000");
          } else if (r < 90 && !s.dispatcher().orders().empty()) {
            s.close_order(1 + static_cast<std::int64_t>(rng() % s.dispatcher().orders().size()), "done", now);
          } else if (r < 93) {
            const auto w = s.registry().lookup(PhoneId::from(p));
            s.release_slot(w.assigned_facility, w.phone, now);
          } else {
            s.drain_outbox(1 + rng() % 7, now);
          }
        } catch (const Error&) {
          // refused operator action; nothing logged
        }
      }
    }
    clock->set(Timestamp{day_of(clock->now()) + days{1}} + minutes{7 * 60});
    s.tick(clock->now());
  }
}

}  // namespace

TEST(Restore, ReplayEqualsLiveState) {
  std::mt19937_64 rng(62);
  Service live(three_site_setup(), std::make_shared<VirtualClock>(Timestamp{make_date(2012, 11, 1)}));
  mixed_session(live, rng);
  const auto restored = Service::restore(live.events());
  EXPECT_EQ(restored->snapshot(), live.snapshot());
  EXPECT_EQ(restored->events(), live.events());

  std::ostringstream text;
  for (const auto& e : live.events()) text << format_event(e) << '\n';
  std::istringstream in(text.str());
  EXPECT_EQ(Service::restore(in)->snapshot(), live.snapshot());
}

TEST(Restore, EmptyLogIsEmptyState) {
  const auto s = Service::restore(std::vector<Event>{});
  EXPECT_TRUE(s->registry().facilities().empty());
  EXPECT_TRUE(s->registry().women().empty());
  EXPECT_TRUE(s->outbox().empty());
}

TEST(Restore, GapAndTamperingAreCorrupt) {
  Service live(three_site_setup());
  live.ingest(kReg);
  live.ingest("SOS|07504432147|36.190000|44.010000");
  auto events = live.events();

  auto gap = events;
  gap.erase(gap.begin() + 2);
  try {
    Service::restore(gap);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CorruptLog);
    EXPECT_NE(std::string(e.what()).find("seq 3"), std::string::npos);
  }

  auto tampered = events;
  tampered[2].payload = "ASSIGN|07504432147|2|Tayrawa|6.5";
  try {
    Service::restore(tampered);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CorruptLog);
    EXPECT_NE(std::string(e.what()).find("seq 3"), std::string::npos);
  }

  auto truncated = events;
  truncated.pop_back();  // RESCUE line missing
  EXPECT_THROW(Service::restore(truncated), Error);
}
