#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "materna/domain.hpp"
#include "materna/geo_point.hpp"
#include "materna/messaging.hpp"
#include "materna/registry.hpp"
#include "materna/time.hpp"

namespace materna {

/// Identity fields copied into every review record without MD input.
struct PrimeInfo {
  std::string name;
  int age = 0;
  GeoPoint home_location;
  int assigned_facility = 0;
  friend bool operator==(const PrimeInfo&, const PrimeInfo&) = default;
};

struct BloodPressure {
  int systolic = 0;
  int diastolic = 0;
  friend bool operator==(const BloodPressure&, const BloodPressure&) = default;
};

/// "sys/dia", both 20..300.
std::optional<BloodPressure> parse_blood_pressure(std::string_view s);
std::string format_blood_pressure(const BloodPressure& bp);

/// A booked review date. `seq` is the review record that booked it; 0 is the
/// intake booking made at registration.
struct Appointment {
  int seq = 0;
  Date date{};
  bool confirmed = false;
  bool reminder_sent = false;
  int reschedules = 0;
  friend bool operator==(const Appointment&, const Appointment&) = default;
};

struct ReviewRecord {
  PhoneId phone;
  int seq = 1;
  PrimeInfo prime_info;
  Date review_date{};
  int gestational_week = 1;
  std::optional<double> weight_kg;
  std::optional<BloodPressure> blood_pressure;
  std::optional<std::string> notes;
  Appointment next;  // next_review and its confirmation/reminder state

  Date next_review() const { return next.date; }
  friend bool operator==(const ReviewRecord&, const ReviewRecord&) = default;
};

/// Fields entered by the examining MD.
struct MdEntry {
  int gestational_week = 1;
  std::optional<double> weight_kg;
  std::optional<BloodPressure> blood_pressure;
  std::optional<std::string> notes;
  Date next_review{};
  std::optional<ConditionSet> conditions;
  /// Optimistic concurrency: when set, must equal the seq the new record gets.
  std::optional<int> expected_seq;
  friend bool operator==(const MdEntry&, const MdEntry&) = default;
};

enum class Advisor { Server, MD, Admin };
enum class AdviceType { Normal, Other };
std::string_view to_string(Advisor a) noexcept;
std::optional<Advisor> advisor_from_string(std::string_view s) noexcept;
std::string_view to_string(AdviceType t) noexcept;

struct AdviceRecord {
  std::int64_t id_code = 0;
  PhoneId phone;
  int trimester = 1;
  bool advice_done = true;
  AdviceType type_of_advice = AdviceType::Normal;
  Advisor who_advisement = Advisor::Server;
  std::string message;
  friend bool operator==(const AdviceRecord&, const AdviceRecord&) = default;
};

struct IssuedAdvice {
  msg::Advice sms;
  AdviceRecord record;
};

/// One canned server advice text per trimester.
struct AdviceTemplates {
  std::array<std::string, 3> text;

  /// Three lines `1|...`, `2|...`, `3|...` in any order. Throws Error(BadTemplates).
  static AdviceTemplates parse(std::string_view document);
  static AdviceTemplates load(const std::filesystem::path& path);
  static AdviceTemplates defaults();
  const std::string& for_trimester(int t) const { return text.at(static_cast<std::size_t>(t - 1)); }
  friend bool operator==(const AdviceTemplates&, const AdviceTemplates&) = default;
};

struct SchedulerSettings {
  int first_review_days = 14;
  int remind_earliest_days = 7;  // window [latest, earliest] before the review
  int remind_latest_days = 3;
  int max_postpone_days = 14;
  int max_reschedules = 1;
};

inline constexpr int kMaxGestationalWeek = 45;

/// Weeks 1-13 -> 1, 14-27 -> 2, 28-45 -> 3. Throws Error(BadWeek) outside [1, 45].
int trimester_of(int gestational_week);

/// Reviews, reminders, reschedules and the advice ledger.
class Scheduler {
 public:
  Scheduler(Registry& registry, AdviceTemplates templates, SchedulerSettings settings = {});

  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  /// Opens the woman's chart with an intake booking `first_review_days` out.
  void on_registered(const WomanRecord& woman);
  void on_released(const PhoneId& phone);

  /// Errors: UnknownWoman, BadNextReview, BadWeek, SeqConflict, InvalidArgument.
  ReviewRecord record_review(const PhoneId& phone, const MdEntry& entry, Timestamp now);

  /// One REMIND per unconfirmed booking once it is within 7 days; late
  /// catch-up when a tick was missed; never twice for the same booking.
  std::vector<msg::Remind> tick(Date today);

  /// Errors: UnknownWoman, NoExcuse.
  Appointment reschedule(const msg::ChangeReview& change, Timestamp now);
  /// Errors: UnknownWoman, DateMismatch.
  Appointment confirm(const msg::Confirm& confirmation);

  /// Server advice for each woman whose current trimester differs from the
  /// last one she was advised for. Women without a recorded week are skipped.
  std::vector<IssuedAdvice> advice_due(Date today);

  /// MD / Admin advice to one woman or, with no target, every active woman.
  /// Errors: AdviceTooLong, BadText, UnknownWoman, InvalidArgument (Server).
  std::vector<IssuedAdvice> compose_advice(Advisor who, const std::optional<PhoneId>& target,
                                           const std::string& text, Date today);

  std::vector<ReviewRecord> reviews(const PhoneId& phone) const;
  /// Errors: UnknownWoman.
  Appointment pending(const PhoneId& phone) const;
  std::optional<int> current_trimester(const PhoneId& phone, Date today) const;
  std::vector<AdviceRecord> ledger() const;

  struct ChartView {
    PhoneId phone;
    bool active;
    Appointment pending;
    std::vector<ReviewRecord> reviews;
    std::optional<int> last_advised_trimester;
  };
  /// Every chart, ordered by phone.
  std::vector<ChartView> charts() const;

 private:
  struct Chart {
    PhoneId phone;
    std::int64_t id_code = 0;
    bool active = true;
    Appointment intake;
    std::vector<ReviewRecord> reviews;
    std::optional<int> last_advised_trimester;

    Appointment& pending() { return reviews.empty() ? intake : reviews.back().next; }
    const Appointment& pending() const { return reviews.empty() ? intake : reviews.back().next; }
  };

  Chart& active_chart(const PhoneId& phone);
  std::optional<int> trimester_locked(const Chart& c, Date today) const;

  Registry& registry_;
  AdviceTemplates templates_;
  SchedulerSettings settings_;
  mutable std::mutex mu_;
  std::map<PhoneId, Chart> charts_;
  std::vector<AdviceRecord> ledger_;
};

}  // namespace materna
