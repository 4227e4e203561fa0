#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "materna/time.hpp"

namespace materna {

enum class EventKind {
  Configured,       // initial settings, facilities and templates
  InboundAccepted,  // raw wire line
  InboundRejected,  // percent-escaped raw bytes
  OutboundQueued,   // encoded outbound line
  ReviewRecorded,
  AdviceComposed,
  ClockTick,
  OrderOpened,
  OrderClosed,
  SlotReleased,
  OutboxFetched,
};

std::string_view to_string(EventKind k) noexcept;
std::optional<EventKind> event_kind_from_string(std::string_view s) noexcept;

struct Event {
  std::int64_t seq = 0;
  Timestamp at{};
  EventKind kind = EventKind::Configured;
  std::string payload;  // never contains a line break

  friend bool operator==(const Event&, const Event&) = default;
};

/// `EVT|<seq>|<iso8601>|<kind>|<payload>`
std::string format_event(const Event& e);

/// Append-only, gapless event sequence starting at seq 1, optionally mirrored
/// line by line into a file.
class EventLog {
 public:
  const Event& append(Timestamp at, EventKind kind, std::string payload);
  const std::vector<Event>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }

  /// Writes every existing event to `path` (truncating) and mirrors later appends.
  void attach_file(const std::filesystem::path& path);

  /// Throws Error(CorruptLog) naming the seq at the first gap or unparseable line.
  static std::vector<Event> read(std::istream& in);
  static std::vector<Event> read_file(const std::filesystem::path& path);

 private:
  std::vector<Event> events_;
  std::optional<std::ofstream> sink_;
};

}  // namespace materna
