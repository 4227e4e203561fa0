#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace materna {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

inline Date day_of(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }

inline Date make_date(int y, unsigned m, unsigned d) {
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                     std::chrono::day{d}};
}

/// Strict `YYYY-MM-DD`; rejects anything that is not a real calendar date.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

/// `YYYY-MM-DDTHH:MM:SSZ`.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

inline long days_between(Date from, Date to) { return (to - from).count(); }

}  // namespace materna
