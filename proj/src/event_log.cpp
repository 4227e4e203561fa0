#include "materna/event_log.hpp"

#include <array>

#include "materna/errors.hpp"
#include "materna/text.hpp"

namespace materna {

namespace {

constexpr std::array<std::string_view, 11> kKindNames{
    "Configured",   "InboundAccepted", "InboundRejected", "OutboundQueued",
    "ReviewRecorded", "AdviceComposed", "ClockTick",      "OrderOpened",
    "OrderClosed",  "SlotReleased",    "OutboxFetched",
};

[[noreturn]] void corrupt(std::int64_t seq, const std::string& why) {
  throw Error(Errc::CorruptLog, "corrupt event log at seq " + std::to_string(seq) + ": " + why);
}

}  // namespace

std::string_view to_string(EventKind k) noexcept { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<EventKind> event_kind_from_string(std::string_view s) noexcept {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == s) return static_cast<EventKind>(i);
  return std::nullopt;
}

std::string format_event(const Event& e) {
  return "EVT|" + std::to_string(e.seq) + '|' + format_timestamp(e.at) + '|' +
         std::string(to_string(e.kind)) + '|' + e.payload;
}

const Event& EventLog::append(Timestamp at, EventKind kind, std::string payload) {
  if (payload.find_first_of("\r\n") != std::string::npos)
    throw Error(Errc::InvalidArgument, "event payload must be a single line");
  events_.push_back(Event{static_cast<std::int64_t>(events_.size()) + 1, at, kind, std::move(payload)});
  if (sink_) {
    *sink_ << format_event(events_.back()) << '\n';
    sink_->flush();
  }
  return events_.back();
}

void EventLog::attach_file(const std::filesystem::path& path) {
  sink_.emplace(path, std::ios::binary | std::ios::trunc);
  if (!*sink_) throw Error(Errc::InvalidArgument, "cannot write event log " + path.string());
  for (const auto& e : events_) *sink_ << format_event(e) << '\n';
  sink_->flush();
}

std::vector<Event> EventLog::read(std::istream& in) {
  std::vector<Event> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::int64_t expected = static_cast<std::int64_t>(out.size()) + 1;
    if (line.empty()) continue;
    // EVT|seq|at|kind|payload -- payload may itself contain '|'
    std::array<std::string_view, 4> head;
    std::string_view rest = line;
    for (auto& h : head) {
      const auto bar = rest.find('|');
      if (bar == std::string_view::npos) corrupt(expected, "truncated record");
      h = rest.substr(0, bar);
      rest.remove_prefix(bar + 1);
    }
    if (head[0] != "EVT") corrupt(expected, "missing EVT tag");
    auto seq = text::parse_uint(head[1]);
    if (!seq) corrupt(expected, "bad seq");
    if (*seq != expected) corrupt(expected, "gap: found seq " + std::string(head[1]));
    auto at = parse_timestamp(head[2]);
    if (!at) corrupt(expected, "bad timestamp");
    auto kind = event_kind_from_string(head[3]);
    if (!kind) corrupt(expected, "unknown kind");
    out.push_back(Event{*seq, *at, *kind, std::string(rest)});
  }
  return out;
}

std::vector<Event> EventLog::read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open event log " + path.string());
  return read(in);
}

}  // namespace materna
