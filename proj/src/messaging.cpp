#include "materna/messaging.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "materna/errors.hpp"
#include "materna/text.hpp"

namespace materna::msg {

namespace {

struct Field {
  std::string_view value;
  std::size_t offset;
};

std::vector<Field> fields_of(std::string_view line) {
  std::vector<Field> out;
  std::size_t offset = 0;
  for (auto part : text::split(line, '|')) {
    out.push_back({part, offset});
    offset += part.size() + 1;
  }
  return out;
}

void check_line(std::string_view line) {
  if (line.empty()) throw ParseError("empty line", 0);
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\n' || line[i] == '\r') throw ParseError("line break inside message", i);
  }
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; };
  if (is_space(line.front())) throw ParseError("leading whitespace", 0);
  if (is_space(line.back())) throw ParseError("trailing whitespace", line.size() - 1);
}

void expect_count(const std::vector<Field>& f, std::size_t n, std::string_view verb) {
  if (f.size() != n) {
    const std::size_t at = f.size() > n ? f[n].offset : f.back().offset + f.back().value.size();
    throw ParseError(std::string(verb) + " expects " + std::to_string(n - 1) + " fields", at);
  }
}

PhoneId phone_at(const Field& f) {
  auto p = PhoneId::parse(f.value);
  if (!p) throw ParseError("bad phone", f.offset);
  return *p;
}

GeoPoint point_at(const Field& lat, const Field& lon) {
  auto la = text::parse_fixed(lat.value, 6);
  if (!la) throw ParseError("bad latitude", lat.offset);
  auto lo = text::parse_fixed(lon.value, 6);
  if (!lo) throw ParseError("bad longitude", lon.offset);
  if (*la < -90.0 || *la > 90.0) throw ParseError("latitude out of range", lat.offset);
  if (*lo < -180.0 || *lo > 180.0) throw ParseError("longitude out of range", lon.offset);
  return *GeoPoint::make(*la, *lo);
}

Date date_at(const Field& f) {
  auto d = parse_date(f.value);
  if (!d) throw ParseError("bad date", f.offset);
  return *d;
}

std::string text_at(const Field& f, std::string_view what) {
  if (!text::is_wire_text(f.value)) throw ParseError("bad " + std::string(what), f.offset);
  return std::string(f.value);
}

std::string coord(double v) { return text::format_fixed(v, 6); }

constexpr std::array<std::pair<ErrCode, std::string_view>, 6> kErrWire{{
    {ErrCode::Dup, "DUP"},
    {ErrCode::NoCap, "NOCAP"},
    {ErrCode::Unreg, "UNREG"},
    {ErrCode::BadMsg, "BADMSG"},
    {ErrCode::BadAge, "BADAGE"},
    {ErrCode::NoExcuse, "NOEXCUSE"},
}};

constexpr std::string_view kUnknownPhone = "UNKNOWN";

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string_view wire_token(ErrCode code) noexcept {
  for (const auto& [k, v] : kErrWire)
    if (k == code) return v;
  return "BADMSG";
}

std::optional<ErrCode> err_code_from_wire(std::string_view token) noexcept {
  for (const auto& [k, v] : kErrWire)
    if (v == token) return k;
  return std::nullopt;
}

Inbound parse_inbound(std::string_view line) {
  check_line(line);
  const auto f = fields_of(line);
  const auto verb = f[0].value;
  if (verb == "REG") {
    expect_count(f, 6, verb);
    Register r{phone_at(f[1]), point_at(f[2], f[3]), text_at(f[4], "name"), 0};
    auto age = text::parse_uint(f[5].value, 3);
    if (!age) throw ParseError("bad age", f[5].offset);
    r.age = static_cast<int>(*age);
    return r;
  }
  if (verb == "SOS") {
    expect_count(f, 4, verb);
    return Sos{phone_at(f[1]), point_at(f[2], f[3])};
  }
  if (verb == "CHG") {
    expect_count(f, 3, verb);
    return ChangeReview{phone_at(f[1]), date_at(f[2])};
  }
  if (verb == "CNF") {
    expect_count(f, 3, verb);
    return Confirm{phone_at(f[1]), date_at(f[2])};
  }
  throw ParseError("unknown verb", 0);
}

std::string encode_inbound(const Inbound& msg) {
  return std::visit(
      overloaded{
          [](const Register& m) {
            if (!text::is_wire_text(m.name)) throw Error(Errc::BadText, "name not representable");
            return "REG|" + m.phone.str() + '|' + coord(m.location.lat_deg()) + '|' +
                   coord(m.location.lon_deg()) + '|' + m.name + '|' + std::to_string(m.age);
          },
          [](const Sos& m) {
            return "SOS|" + m.phone.str() + '|' + coord(m.location.lat_deg()) + '|' +
                   coord(m.location.lon_deg());
          },
          [](const ChangeReview& m) { return "CHG|" + m.phone.str() + '|' + format_date(m.new_date); },
          [](const Confirm& m) { return "CNF|" + m.phone.str() + '|' + format_date(m.date); },
      },
      msg);
}

std::string encode_outbound(const Outbound& msg) {
  return std::visit(
      overloaded{
          [](const Assign& m) {
            if (!text::is_wire_text(m.facility_name))
              throw Error(Errc::BadText, "facility name not representable");
            if (!(m.distance_km >= 0.0) || !std::isfinite(m.distance_km))
              throw Error(Errc::InvalidArgument, "bad distance");
            const double km = m.distance_km == 0.0 ? 0.0 : m.distance_km;
            return "ASSIGN|" + m.phone.str() + '|' + std::to_string(m.facility_id) + '|' +
                   m.facility_name + '|' + text::format_fixed(km, 1);
          },
          [](const Remind& m) { return "REMIND|" + m.phone.str() + '|' + format_date(m.review_date); },
          [](const Advice& m) {
            if (m.trimester < 1 || m.trimester > 3) throw Error(Errc::InvalidArgument, "bad trimester");
            if (!text::is_wire_text(m.text)) throw Error(Errc::BadText, "advice text not representable");
            if (text::utf8_length(m.text) > kAdviceTextMax)
              throw Error(Errc::AdviceTooLong, "advice text exceeds 250 characters");
            return "ADVICE|" + m.phone.str() + '|' + std::to_string(m.trimester) + '|' + m.text;
          },
          [](const Rescue& m) {
            return "RESCUE|" + m.phone.str() + '|' + std::string(wire_token(m.vehicle)) + '|' +
                   std::to_string(m.eta_min);
          },
          [](const Err& m) {
            return "ERR|" + (m.phone ? m.phone->str() : std::string(kUnknownPhone)) + '|' +
                   std::string(wire_token(m.code));
          },
      },
      msg);
}

Outbound parse_outbound(std::string_view line) {
  check_line(line);
  const auto f = fields_of(line);
  const auto verb = f[0].value;
  if (verb == "ASSIGN") {
    expect_count(f, 5, verb);
    auto id = text::parse_uint(f[2].value, 9);
    if (!id || *id < 1) throw ParseError("bad facility id", f[2].offset);
    auto km = text::parse_fixed(f[4].value, 1);
    if (!km || *km < 0.0 || f[4].value.front() == '-') throw ParseError("bad distance", f[4].offset);
    return Assign{phone_at(f[1]), static_cast<int>(*id), text_at(f[3], "facility name"), *km};
  }
  if (verb == "REMIND") {
    expect_count(f, 3, verb);
    return Remind{phone_at(f[1]), date_at(f[2])};
  }
  if (verb == "ADVICE") {
    expect_count(f, 4, verb);
    const auto t = f[2].value;
    if (t != "1" && t != "2" && t != "3") throw ParseError("bad trimester", f[2].offset);
    auto body = text_at(f[3], "advice text");
    if (text::utf8_length(body) > kAdviceTextMax) throw ParseError("advice too long", f[3].offset);
    return Advice{phone_at(f[1]), t[0] - '0', std::move(body)};
  }
  if (verb == "RESCUE") {
    expect_count(f, 4, verb);
    auto v = vehicle_from_wire(f[2].value);
    if (!v) throw ParseError("bad vehicle", f[2].offset);
    auto eta = text::parse_uint(f[3].value, 6);
    if (!eta || *eta < 1) throw ParseError("bad eta", f[3].offset);
    return Rescue{phone_at(f[1]), *v, static_cast<int>(*eta)};
  }
  if (verb == "ERR") {
    expect_count(f, 3, verb);
    std::optional<PhoneId> phone;
    if (f[1].value != kUnknownPhone) phone = phone_at(f[1]);
    auto code = err_code_from_wire(f[2].value);
    if (!code) throw ParseError("bad error code", f[2].offset);
    return Err{phone, *code};
  }
  throw ParseError("unknown verb", 0);
}

const PhoneId& sender(const Inbound& msg) noexcept {
  return std::visit([](const auto& m) -> const PhoneId& { return m.phone; }, msg);
}

std::optional<PhoneId> recipient(const Outbound& msg) {
  return std::visit(overloaded{
                        [](const Err& m) { return m.phone; },
                        [](const auto& m) { return std::optional<PhoneId>(m.phone); },
                    },
                    msg);
}

std::string_view verb(const Inbound& msg) noexcept {
  constexpr std::array<std::string_view, 4> kVerbs{"REG", "SOS", "CHG", "CNF"};
  return kVerbs[msg.index()];
}

std::string_view verb(const Outbound& msg) noexcept {
  constexpr std::array<std::string_view, 5> kVerbs{"ASSIGN", "REMIND", "ADVICE", "RESCUE", "ERR"};
  return kVerbs[msg.index()];
}

std::optional<PhoneId> salvage_phone(std::string_view line) {
  const auto first = line.find('|');
  if (first == std::string_view::npos) return std::nullopt;
  auto rest = line.substr(first + 1);
  return PhoneId::parse(rest.substr(0, rest.find('|')));
}

}  // namespace materna::msg
