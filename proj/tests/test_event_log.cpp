#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "materna/errors.hpp"
#include "materna/event_log.hpp"

using namespace materna;

namespace {

const Timestamp kAt = parse_timestamp("2012-11-01T08:30:00Z").value();

std::string corrupt_message(const std::string& doc) {
  std::istringstream in(doc);
  try {
    EventLog::read(in);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CorruptLog);
    return e.what();
  }
  ADD_FAILURE() << "accepted corrupt log";
  return {};
}

}  // namespace

TEST(Timestamps, RoundTrip) {
  EXPECT_EQ(format_timestamp(kAt), "2012-11-01T08:30:00Z");
  EXPECT_FALSE(parse_timestamp("2012-11-01 08:30:00"));
  EXPECT_FALSE(parse_timestamp("2012-11-31T08:30:00Z"));
  EXPECT_FALSE(parse_timestamp("2012-11-01T24:00:00Z"));
}

TEST(EventLog, FormatAndRead) {
  EventLog log;
  log.append(kAt, EventKind::InboundAccepted, "REG|07504432147|36.190000|44.010000|Sara|27");
  log.append(kAt, EventKind::ClockTick, "");
  EXPECT_EQ(format_event(log.events()[0]),
            "EVT|1|2012-11-01T08:30:00Z|InboundAccepted|REG|07504432147|36.190000|44.010000|Sara|27");
  std::ostringstream out;
  for (const auto& e : log.events()) out << format_event(e) << '\n';
  std::istringstream in(out.str());
  EXPECT_EQ(EventLog::read(in), log.events());
}

TEST(EventLog, RejectsLineBreaksInPayload) {
  EventLog log;
  EXPECT_THROW(log.append(kAt, EventKind::ClockTick, "a\nb"), Error);
  EXPECT_EQ(log.size(), 0u);
}

TEST(EventLog, CorruptionNamesSeq) {
  const std::string e1 = "EVT|1|2012-11-01T08:30:00Z|ClockTick|\n";
  EXPECT_NE(corrupt_message(e1 + "EVT|3|2012-11-01T08:30:00Z|ClockTick|\n").find("seq 2"), std::string::npos);
  EXPECT_NE(corrupt_message(e1 + "EVT|2|yesterday|ClockTick|\n").find("seq 2"), std::string::npos);
  EXPECT_NE(corrupt_message(e1 + "EVT|2|2012-11-01T08:30:00Z|Nonsense|\n").find("seq 2"), std::string::npos);
  EXPECT_NE(corrupt_message("garbage\n").find("seq 1"), std::string::npos);
}

TEST(EventLog, EmptyInputIsEmptyLog) {
  std::istringstream in("");
  EXPECT_TRUE(EventLog::read(in).empty());
}

TEST(EventLog, FileMirror) {
  const auto path = std::filesystem::temp_directory_path() / "materna_event_log_test.log";
  EventLog log;
  log.append(kAt, EventKind::ClockTick, "");
  log.attach_file(path);
  log.append(kAt, EventKind::OutboxFetched, "{\"count\":1}");
  EXPECT_EQ(EventLog::read_file(path), log.events());
  std::filesystem::remove(path);
}
