#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "materna/config.hpp"
#include "materna/dispatch.hpp"
#include "materna/errors.hpp"
#include "materna/event_log.hpp"
#include "materna/messaging.hpp"
#include "materna/registry.hpp"
#include "materna/scheduler.hpp"

namespace materna {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
};

class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(Timestamp start) : now_(start) {}
  Timestamp now() const override;
  void set(Timestamp t);
  Timestamp advance(std::chrono::minutes by);

 private:
  mutable std::mutex mu_;
  Timestamp now_;
};

class WallClock final : public Clock {
 public:
  Timestamp now() const override;
};

enum class Delivery { Queued, Fetched };

struct OutboxEntry {
  std::int64_t id = 0;  // position in the outbox, from 1
  msg::Outbound message;
  std::string line;
  Delivery state = Delivery::Queued;
};

struct DeadLetter {
  Timestamp at{};
  std::string raw;  // percent-escaped
  std::string reason;
  std::size_t offset = 0;
  std::string reply;  // the ERR line produced for it
};

/// Everything needed to build a service from scratch; also what the
/// `Configured` event records.
struct ServiceSetup {
  std::int64_t id_code_seed = kDefaultIdCodeSeed;
  DispatchSettings dispatch;
  SchedulerSettings scheduler;
  std::vector<Facility> facilities;
  AdviceTemplates templates = AdviceTemplates::defaults();

  /// Loads facilities and templates named by the config.
  static ServiceSetup from_config(const Config& config);
  nlohmann::json to_json() const;
  static ServiceSetup from_json(const nlohmann::json& j);
};

/// Gateway, outbox and persistence around registry, scheduler and dispatch.
///
/// Every mutation is serialized through one lock and recorded in the event
/// log. Command events (inbound lines, MD entries, advice, ticks, closes,
/// releases, drains) are re-executed by `restore`; derived events are
/// regenerated and must match the log byte for byte.
class Service {
 public:
  explicit Service(ServiceSetup setup, std::shared_ptr<Clock> clock = nullptr);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Parses, routes and queues replies. Never throws for bad input: parse
  /// failures become BADMSG replies plus a dead-letter entry, domain
  /// failures become ERR replies.
  std::vector<msg::Outbound> ingest(std::string_view line, Timestamp now);
  std::vector<msg::Outbound> ingest(std::string_view line);

  /// Up to `max` queued messages in FIFO order, each handed out once.
  std::vector<OutboxEntry> drain_outbox(std::size_t max, Timestamp now);
  std::vector<OutboxEntry> drain_outbox(std::size_t max);

  /// Reminders and server advice for the day of `now`.
  std::vector<msg::Outbound> tick(Timestamp now);

  ReviewRecord record_review(const PhoneId& phone, const MdEntry& entry, Timestamp now);
  std::vector<msg::Outbound> compose_advice(Advisor who, const std::optional<PhoneId>& target,
                                            const std::string& text, Timestamp now);
  DispatchOrder close_order(std::int64_t order_id, const std::string& outcome, Timestamp now);
  WomanRecord release_slot(int facility_id, const PhoneId& phone, Timestamp now);

  /// Observable state: facilities, women, charts, advice ledger, orders,
  /// outbox with delivery marks, dead letters, id counters.
  nlohmann::json snapshot() const;

  /// Rebuilds a service by replaying a log. Throws Error(CorruptLog).
  static std::unique_ptr<Service> restore(const std::vector<Event>& log);
  static std::unique_ptr<Service> restore(std::istream& log);

  void attach_log_file(const std::filesystem::path& path);

  const Registry& registry() const noexcept { return registry_; }
  const Scheduler& scheduler() const noexcept { return scheduler_; }
  const Dispatcher& dispatcher() const noexcept { return dispatcher_; }
  std::vector<Event> events() const;
  std::vector<OutboxEntry> outbox() const;
  std::vector<DeadLetter> dead_letters() const;
  Clock& clock() noexcept { return *clock_; }
  /// Non-null only for a virtual clock.
  VirtualClock* virtual_clock() noexcept { return dynamic_cast<VirtualClock*>(clock_.get()); }

 private:
  std::vector<msg::Outbound> route(const msg::Inbound& in, Timestamp now);
  void queue(const msg::Outbound& out, Timestamp now);
  void queue_all(const std::vector<msg::Outbound>& out, Timestamp now);

  mutable std::mutex mu_;
  std::shared_ptr<Clock> clock_;
  Registry registry_;
  Scheduler scheduler_;
  Dispatcher dispatcher_;
  EventLog log_;
  std::vector<OutboxEntry> outbox_;
  std::size_t next_unfetched_ = 0;
  std::vector<DeadLetter> dead_letters_;
};

/// Maps a domain failure onto the closed set of wire error codes.
msg::ErrCode wire_error_for(Errc code) noexcept;

}  // namespace materna
