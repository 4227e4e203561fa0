#include <gtest/gtest.h>

#include "materna/errors.hpp"
#include "materna/simulator.hpp"
#include "support.hpp"

using namespace materna;
using namespace materna::testing;

namespace {

ServiceSetup three_site_setup() {
  ServiceSetup s;
  s.facilities = three_site_facilities();
  return s;
}

sim::Report run_text(const std::string& scenario, std::uint64_t seed, std::vector<Event>* log = nullptr) {
  auto setup = three_site_setup();
  const auto steps = sim::expand(sim::parse_scenario(scenario), setup.facilities, seed);
  Service s(setup);
  const auto r = sim::run(steps, s);
  if (log) *log = s.events();
  return r;
}

}  // namespace

TEST(Scenario, ParseErrorsNameTheLine) {
  for (const char* bad : {"@5 TICK\n@3 TICK\n", "TICK\n", "@x TICK\n", "@1\n", "@1 REVIEW 0750\n", "@1 TICK now\n"}) {
    try {
      sim::parse_scenario(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::BadScenario);
      EXPECT_NE(std::string(e.what()).find("line "), std::string::npos);
    }
  }
  try {
    sim::parse_scenario("# c\n@1 TICK\n\n@0 TICK\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(Scenario, EmptyGivesZeros) {
  const auto r = run_text("", 1);
  EXPECT_EQ(r, sim::Report{});
  EXPECT_EQ(r.messages_total(), 0);
}

TEST(Scenario, ThreeSiteRegistrationThenReminder) {
  std::vector<Event> log;
  const auto r = run_text("@0 REG|07504432147|36.190000|44.010000|Sara|27\n@10080 TICK\n", 1, &log);
  EXPECT_EQ(r.registrations_ok, 1);
  EXPECT_EQ(r.reminders_sent, 1);
  EXPECT_EQ(r.messages_outbound, 2);
  EXPECT_EQ(r.messages_total(), 3);
  EXPECT_EQ(sim::summarize(log), r);
}

TEST(Scenario, OperatorDirectives) {
  const auto r = run_text(
      "@0 REG|07504432147|36.190000|44.010000|Sara|27\n"
      "@0 REG|0750000001|36.190000|44.010000|Lana|30\n"
      "@60 SOS|07504432147|36.190000|44.010000\n"
      "@61 CLOSE 1 delivered\n"
      "@62 CLOSE 1 twice\n"
      "@100 REVIEW 07504432147 12 +28 Hypertension,Asthma\n"
      "@101 REVIEW 0799999999 12 +28\n"
      "@200 ADVICE MD 07504432147 Rest and drink water.\n"
      "@201 ADVICE Admin ALL Clinic closed Friday.\n"
      "@300 RELEASE 3 0750000001\n"
      "@301 DRAIN 3\n"
      "@400 CHG|07504432147|2012-12-03\n"
      "@401 CHG|07504432147|2012-12-04\n"
      "@402 CNF|07504432147|2012-12-03\n"
      "@403 CNF|07504432147|2012-12-09\n"
      "@404 nonsense\n",
      1);
  EXPECT_EQ(r.registrations_ok, 2);
  EXPECT_EQ(r.sos_orders, 1);
  EXPECT_EQ(r.sos_car, 1);
  EXPECT_EQ(r.orders_closed, 1);
  EXPECT_EQ(r.reviews_recorded, 1);
  EXPECT_EQ(r.advice_md, 1);
  EXPECT_EQ(r.advice_admin, 2);
  EXPECT_EQ(r.releases, 1);
  EXPECT_EQ(r.reschedules_accepted, 1);
  EXPECT_EQ(r.reschedules_refused, 1);
  EXPECT_EQ(r.confirmations_ok, 1);
  EXPECT_EQ(r.confirmations_refused, 1);
  EXPECT_EQ(r.inbound_rejected, 1);
}

TEST(Scenario, PopulationIsDeterministicAndMatchesLog) {
  const std::string scn = "@0 POPULATION 200 40\n@30000 ADVICE Admin ALL Hello.\n";
  std::vector<Event> log;
  const auto a = run_text(scn, 7, &log);
  const auto b = run_text(scn, 7);
  const auto c = run_text(scn, 8);
  EXPECT_EQ(a.render(), b.render());
  EXPECT_NE(a.render(), c.render());
  EXPECT_EQ(sim::summarize(log).render(), a.render());
  // Free slots in the three-facility set: 0 + 38 + 40.
  EXPECT_EQ(a.registrations_ok, 78);
  EXPECT_GT(a.registrations_rejected, 100);
  EXPECT_GT(a.reminders_sent, 0);
  EXPECT_GT(a.advice_server_t3, 0);
}

TEST(Scenario, RenderHasFixedOrder) {
  const auto text = sim::Report{}.render();
  EXPECT_EQ(text.substr(0, 16), "inbound_lines=0\n");
  EXPECT_NE(text.find("messages_total=0\n"), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
}
