#include <gtest/gtest.h>

#include <map>
#include <random>

#include "materna/errors.hpp"
#include "materna/registry.hpp"
#include "materna/scheduler.hpp"
#include "support.hpp"

using namespace materna;
using namespace materna::testing;
using std::chrono::days;

namespace {

const Date kDay0 = make_date(2012, 11, 1);
Timestamp at(Date d) { return Timestamp{d}; }

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidArgument;
}

struct Fixture {
  Registry registry{three_site_facilities()};
  Scheduler scheduler{registry, AdviceTemplates::defaults()};

  PhoneId enrol(const std::string& phone, Date when = kDay0) {
    const auto r = registry.register_woman(msg::Register{PhoneId::from(phone), kThreeSiteSource, "Sara", 27}, at(when));
    scheduler.on_registered(r.woman);
    return r.woman.phone;
  }

  ReviewRecord review(const PhoneId& p, Date today, int week, Date next) {
    MdEntry e;
    e.gestational_week = week;
    e.next_review = next;
    return scheduler.record_review(p, e, at(today));
  }
};

}  // namespace

TEST(Trimester, Boundaries) {
  EXPECT_EQ(trimester_of(1), 1);
  EXPECT_EQ(trimester_of(13), 1);
  EXPECT_EQ(trimester_of(14), 2);
  EXPECT_EQ(trimester_of(27), 2);
  EXPECT_EQ(trimester_of(28), 3);
  EXPECT_EQ(trimester_of(40), 3);
  EXPECT_EQ(trimester_of(45), 3);
  EXPECT_EQ(code_of([] { trimester_of(0); }), Errc::BadWeek);
  EXPECT_EQ(code_of([] { trimester_of(46); }), Errc::BadWeek);
  for (int w = 2; w <= 45; ++w) EXPECT_LE(trimester_of(w - 1), trimester_of(w));
}

TEST(Templates, ParseAndReject) {
  const auto t = AdviceTemplates::parse("1|one\n2|two\n3|three\n");
  EXPECT_EQ(t.for_trimester(2), "two");
  EXPECT_THROW(AdviceTemplates::parse("1|one\n2|two\n"), Error);
  EXPECT_EQ(AdviceTemplates::parse("3|three\n1|one\n2|two\n"), t);
  EXPECT_THROW(AdviceTemplates::parse("1|one\n2|two\n2|again\n3|three\n"), Error);
  EXPECT_THROW(AdviceTemplates::parse("1|one\n2|two\n4|four\n"), Error);
  EXPECT_THROW(AdviceTemplates::parse("1|one\n2|two\n3|" + std::string(251, 'x') + "\n"), Error);
  for (int i = 1; i <= 3; ++i) EXPECT_LE(AdviceTemplates::defaults().for_trimester(i).size(), 250u);
}

TEST(BloodPressure, ParseFormat) {
  auto bp = parse_blood_pressure("120/80");
  ASSERT_TRUE(bp);
  EXPECT_EQ(format_blood_pressure(*bp), "120/80");
  EXPECT_FALSE(parse_blood_pressure("120-80"));
  EXPECT_FALSE(parse_blood_pressure("999/80"));
}

TEST(Review, FirstReviewCopiesRegistryPrimeInfo) {
  Fixture f;
  const auto p = f.enrol("07504432147");
  const auto r = f.review(p, kDay0 + days{14}, 12, kDay0 + days{44});
  EXPECT_EQ(r.seq, 1);
  const auto w = f.registry.lookup(p);
  EXPECT_EQ(r.prime_info, (PrimeInfo{w.name, w.age, w.home_location, w.assigned_facility}));
  EXPECT_EQ(r.next_review(), kDay0 + days{44});
  ASSERT_TRUE(f.registry.lookup(p).gestation_start);
  EXPECT_EQ(*f.registry.lookup(p).gestation_start, kDay0 + days{14} - days{77});
}

TEST(Review, ChainAndSeq) {
  Fixture f;
  const auto p = f.enrol("07504432147");
  Date d = kDay0 + days{14};
  std::vector<ReviewRecord> rs;
  for (int i = 0; i < 3; ++i) {
    rs.push_back(f.review(p, d, 12 + 4 * i, d + days{28}));
    d += days{28};
  }
  for (int i = 0; i < 3; ++i) EXPECT_EQ(rs[static_cast<std::size_t>(i)].seq, i + 1);
  EXPECT_EQ(rs[1].prime_info, rs[0].prime_info);
  EXPECT_EQ(rs[2].prime_info, rs[1].prime_info);
  EXPECT_EQ(f.scheduler.reviews(p), rs);
}

TEST(Review, Errors) {
  Fixture f;
  const auto p = f.enrol("07504432147");
  const Date today = kDay0 + days{14};
  EXPECT_EQ(code_of([&] { f.review(p, today, 12, today); }), Errc::BadNextReview);
  EXPECT_EQ(code_of([&] { f.review(p, today, 0, today + days{1}); }), Errc::BadWeek);
  EXPECT_EQ(code_of([&] { f.review(PhoneId::from("0799999999"), today, 12, today + days{1}); }),
            Errc::UnknownWoman);
  MdEntry e;
  e.gestational_week = 12;
  e.next_review = today + days{28};
  e.expected_seq = 2;
  EXPECT_EQ(code_of([&] { f.scheduler.record_review(p, e, at(today)); }), Errc::SeqConflict);
  e.expected_seq = 1;
  EXPECT_EQ(f.scheduler.record_review(p, e, at(today)).seq, 1);
}

TEST(Review, ConditionsReachRegistry) {
  Fixture f;
  const auto p = f.enrol("07504432147");
  MdEntry e;
  e.gestational_week = 20;
  e.next_review = kDay0 + days{40};
  ConditionSet c;
  c.insert(Condition::Diabetes);
  e.conditions = c;
  f.scheduler.record_review(p, e, at(kDay0 + days{10}));
  EXPECT_TRUE(f.registry.lookup(p).conditions.contains(Condition::Diabetes));
}

TEST(Reminder, WindowAndOnceOnly) {
  Fixture f;
  const auto p = f.enrol("07504432147", make_date(2012, 10, 1));
  f.review(p, make_date(2012, 10, 20), 12, make_date(2012, 11, 20));
  EXPECT_TRUE(f.scheduler.tick(make_date(2012, 11, 10)).empty());
  const auto r = f.scheduler.tick(make_date(2012, 11, 14));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], (msg::Remind{p, make_date(2012, 11, 20)}));
  EXPECT_TRUE(f.scheduler.tick(make_date(2012, 11, 14)).empty());
  EXPECT_TRUE(f.scheduler.tick(make_date(2012, 11, 18)).empty());
}

TEST(Reminder, IntakeBookingGetsReminder) {
  Fixture f;
  const auto p = f.enrol("07504432147");
  EXPECT_EQ(f.scheduler.pending(p).date, kDay0 + days{14});
  EXPECT_TRUE(f.scheduler.tick(kDay0 + days{6}).empty());
  EXPECT_EQ(f.scheduler.tick(kDay0 + days{7}).size(), 1u);
}

TEST(Reminder, LateCatchUpAfterDowntime) {
  Fixture f;
  const auto p = f.enrol("07504432147");
  f.review(p, kDay0, 12, kDay0 + days{20});
  EXPECT_EQ(f.scheduler.tick(kDay0 + days{19}).size(), 1u);  // 1 day out
  EXPECT_TRUE(f.scheduler.tick(kDay0 + days{20}).empty());
  Fixture g;
  const auto q = g.enrol("07504432147");
  g.review(q, kDay0, 12, kDay0 + days{20});
  EXPECT_TRUE(g.scheduler.tick(kDay0 + days{21}).empty());  // past: nothing
}

TEST(Reminder, ConfirmedGetsNone) {
  Fixture f;
  const auto p = f.enrol("07504432147");
  f.review(p, kDay0, 12, make_date(2012, 11, 20));
  f.scheduler.confirm(msg::Confirm{p, make_date(2012, 11, 20)});
  EXPECT_TRUE(f.scheduler.pending(p).confirmed);
  EXPECT_TRUE(f.scheduler.tick(make_date(2012, 11, 15)).empty());
  EXPECT_EQ(code_of([&] { f.scheduler.confirm(msg::Confirm{p, make_date(2012, 11, 21)}); }), Errc::DateMismatch);
}

TEST(Reschedule, Policy) {
  Fixture f;
  const auto p = f.enrol("07504432147");
  f.review(p, kDay0, 12, make_date(2012, 11, 20));
  ASSERT_EQ(f.scheduler.tick(make_date(2012, 11, 14)).size(), 1u);
  const auto a = f.scheduler.reschedule(msg::ChangeReview{p, make_date(2012, 11, 25)}, at(make_date(2012, 11, 14)));
  EXPECT_EQ(a.date, make_date(2012, 11, 25));
  EXPECT_FALSE(a.reminder_sent);
  EXPECT_EQ(f.scheduler.tick(make_date(2012, 11, 18)).size(), 1u);  // re-armed
  EXPECT_EQ(code_of([&] {
              f.scheduler.reschedule(msg::ChangeReview{p, make_date(2012, 11, 26)}, at(make_date(2012, 11, 18)));
            }),
            Errc::NoExcuse);
}

TEST(Reschedule, BoundsAndPast) {
  Fixture f;
  const auto p = f.enrol("07504432147");
  f.review(p, kDay0, 12, make_date(2012, 11, 20));
  const Timestamp now = at(make_date(2012, 11, 10));
  EXPECT_EQ(code_of([&] { f.scheduler.reschedule(msg::ChangeReview{p, make_date(2012, 12, 10)}, now); }),
            Errc::NoExcuse);
  EXPECT_EQ(code_of([&] { f.scheduler.reschedule(msg::ChangeReview{p, make_date(2012, 11, 10)}, now); }),
            Errc::NoExcuse);
  EXPECT_EQ(f.scheduler.reschedule(msg::ChangeReview{p, make_date(2012, 12, 4)}, now).date, make_date(2012, 12, 4));
}

TEST(ScheduleProperty, ReminderOncePerBookingAndBeforeIt) {
  std::mt19937_64 rng(41);
  Fixture f;
  std::vector<PhoneId> phones;
  for (int i = 0; i < 60; ++i) phones.push_back(f.enrol("07" + std::to_string(600000000 + i)));
  std::map<std::pair<std::string, int>, int> reminders;
  std::map<std::string, int> seq;
  for (int day = 0; day < 200; ++day) {
    const Date today = kDay0 + days{day};
    for (const auto& p : phones) {
      const auto pending = f.scheduler.pending(p);
      const auto r = rng() % 100;
      if (r < 3) {
        try {
          // A moved booking counts as a new one: its key gains a reschedule.
          f.scheduler.reschedule(msg::ChangeReview{p, today + days{uniform_int(rng, -2, 20)}}, at(today));
        } catch (const Error& e) {
          ASSERT_EQ(e.code(), Errc::NoExcuse);
        }
      } else if (r < 5 && pending.date <= today + days{2}) {
        f.review(p, today, 10, today + days{uniform_int(rng, 1, 40)});
        seq[p.str()]++;
      }
    }
    for (const auto& rem : f.scheduler.tick(today)) {
      const auto pending = f.scheduler.pending(rem.phone);
      ASSERT_EQ(rem.review_date, pending.date);
      ASSERT_LE(today, pending.date);
      const std::pair key{rem.phone.str(), seq[rem.phone.str()] * 100 + pending.reschedules};
      ASSERT_EQ(++reminders[key], 1);
    }
    for (const auto& p : phones) ASSERT_GE(f.scheduler.pending(p).date, kDay0);
  }
}

TEST(Advice, ServerLifecycleThreeTrimesters) {
  Fixture f;
  const auto p = f.enrol("07504432147");
  EXPECT_TRUE(f.scheduler.advice_due(kDay0 + days{1}).empty());  // no week yet
  f.review(p, kDay0 + days{1}, 6, kDay0 + days{400});
  std::vector<int> seen;
  for (int d = 1; d < 300; d += 7)
    for (const auto& a : f.scheduler.advice_due(kDay0 + days{d})) seen.push_back(a.sms.trimester);
  EXPECT_EQ(seen, (std::vector<int>{1, 2, 3}));
  for (const auto& row : f.scheduler.ledger()) {
    EXPECT_EQ(row.who_advisement, Advisor::Server);
    EXPECT_EQ(row.type_of_advice, AdviceType::Normal);
    EXPECT_TRUE(row.advice_done);
  }
}

TEST(Advice, ComposeFanOutAndErrors) {
  Fixture f;
  std::vector<PhoneId> ps;
  for (int i = 0; i < 5; ++i) ps.push_back(f.enrol("07" + std::to_string(700000000 + i)));
  const auto one = f.scheduler.compose_advice(Advisor::MD, ps[0], "Rest well.", kDay0);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].record.who_advisement, Advisor::MD);
  EXPECT_EQ(one[0].record.type_of_advice, AdviceType::Other);
  EXPECT_EQ(f.scheduler.compose_advice(Advisor::Admin, std::nullopt, "Clinic closed Friday.", kDay0).size(), 5u);
  EXPECT_EQ(f.scheduler.ledger().size(), 6u);
  EXPECT_EQ(code_of([&] { f.scheduler.compose_advice(Advisor::MD, ps[0], std::string(251, 'a'), kDay0); }),
            Errc::AdviceTooLong);
  EXPECT_EQ(code_of([&] { f.scheduler.compose_advice(Advisor::MD, PhoneId::from("0799999999"), "x", kDay0); }),
            Errc::UnknownWoman);
  EXPECT_EQ(code_of([&] { f.scheduler.compose_advice(Advisor::Server, ps[0], "x", kDay0); }),
            Errc::InvalidArgument);
  EXPECT_EQ(f.scheduler.ledger().size(), 6u);
}
