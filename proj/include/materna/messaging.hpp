#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "materna/domain.hpp"
#include "materna/geo_point.hpp"
#include "materna/time.hpp"

// Line protocol of the simulated SMS channel. One message per line, fields
// separated by `|`, no escaping.
//
//   inbound   REG|<phone>|<lat.6>|<lon.6>|<name>|<age>
//             SOS|<phone>|<lat.6>|<lon.6>
//             CHG|<phone>|<YYYY-MM-DD>
//             CNF|<phone>|<YYYY-MM-DD>
//   outbound  ASSIGN|<phone>|<facility_id>|<facility_name>|<km.1>
//             REMIND|<phone>|<YYYY-MM-DD>
//             ADVICE|<phone>|<1|2|3>|<text>
//             RESCUE|<phone>|<CAR|BOAT|HELI>|<eta_min>
//             ERR|<phone|UNKNOWN>|<DUP|NOCAP|UNREG|BADMSG|BADAGE|NOEXCUSE>
namespace materna::msg {

inline constexpr std::size_t kAdviceTextMax = 250;

struct Register {
  PhoneId phone;
  GeoPoint location;
  std::string name;
  int age = 0;
  friend bool operator==(const Register&, const Register&) = default;
};

struct Sos {
  PhoneId phone;
  GeoPoint location;
  friend bool operator==(const Sos&, const Sos&) = default;
};

struct ChangeReview {
  PhoneId phone;
  Date new_date;
  friend bool operator==(const ChangeReview&, const ChangeReview&) = default;
};

struct Confirm {
  PhoneId phone;
  Date date;
  friend bool operator==(const Confirm&, const Confirm&) = default;
};

using Inbound = std::variant<Register, Sos, ChangeReview, Confirm>;

struct Assign {
  PhoneId phone;
  int facility_id = 0;
  std::string facility_name;
  double distance_km = 0.0;
  friend bool operator==(const Assign&, const Assign&) = default;
};

struct Remind {
  PhoneId phone;
  Date review_date;
  friend bool operator==(const Remind&, const Remind&) = default;
};

struct Advice {
  PhoneId phone;
  int trimester = 1;
  std::string text;
  friend bool operator==(const Advice&, const Advice&) = default;
};

struct Rescue {
  PhoneId phone;
  Vehicle vehicle = Vehicle::Car;
  int eta_min = 1;
  friend bool operator==(const Rescue&, const Rescue&) = default;
};

enum class ErrCode { Dup, NoCap, Unreg, BadMsg, BadAge, NoExcuse };

struct Err {
  std::optional<PhoneId> phone;  // nullopt renders as UNKNOWN
  ErrCode code = ErrCode::BadMsg;
  friend bool operator==(const Err&, const Err&) = default;
};

using Outbound = std::variant<Assign, Remind, Advice, Rescue, Err>;

/// Throws ParseError; never anything else.
Inbound parse_inbound(std::string_view line);
std::string encode_inbound(const Inbound& msg);

/// Throws Error(AdviceTooLong) or Error(BadText) when the message cannot be
/// represented on the wire.
std::string encode_outbound(const Outbound& msg);
/// Simulator-side decoder for the outbound grammar. Throws ParseError.
Outbound parse_outbound(std::string_view line);

std::string_view wire_token(ErrCode code) noexcept;
std::optional<ErrCode> err_code_from_wire(std::string_view token) noexcept;

/// Phone of the sender / recipient; nullopt only for an unaddressed Err.
const PhoneId& sender(const Inbound& msg) noexcept;
std::optional<PhoneId> recipient(const Outbound& msg);

std::string_view verb(const Inbound& msg) noexcept;
std::string_view verb(const Outbound& msg) noexcept;

/// Best-effort recovery of the phone field of an unparseable line, used to
/// address the BADMSG reply.
std::optional<PhoneId> salvage_phone(std::string_view line);

}  // namespace materna::msg
