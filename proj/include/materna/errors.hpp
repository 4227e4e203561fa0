#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace materna {

enum class Errc {
  InvalidArgument,
  NoFacilities,
  NoCapacityAnywhere,
  MalformedRow,
  DuplicateFacilityId,
  CapacityViolation,
  DuplicatePhone,
  BadAge,
  UnknownWoman,
  NotRegisteredThere,
  BadNextReview,
  SeqConflict,
  NoExcuse,
  NoPendingReview,
  DateMismatch,
  BadWeek,
  AdviceTooLong,
  BadText,
  BadTemplates,
  NoVehicleAvailable,
  UnknownOrder,
  AlreadyClosed,
  CorruptLog,
  BadConfig,
  BadScenario,
};

std::string_view to_string(Errc code) noexcept;

/// Domain failure carrying a stable code. Service code maps these onto wire
/// ERR codes; the HTTP layer reports `to_string(code())`.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised by the wire parsers. `offset` is the byte offset of the offending
/// field within the input line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string reason, std::size_t offset)
      : std::runtime_error(reason + " at offset " + std::to_string(offset)),
        reason_(std::move(reason)),
        offset_(offset) {}

  const std::string& reason() const noexcept { return reason_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string reason_;
  std::size_t offset_;
};

}  // namespace materna
