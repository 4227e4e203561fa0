#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace materna::text {

std::vector<std::string_view> split(std::string_view s, char sep);

bool is_valid_utf8(std::string_view s) noexcept;
/// Number of code points; assumes valid UTF-8.
std::size_t utf8_length(std::string_view s) noexcept;

/// Free-text field usable on the wire: non-empty valid UTF-8 with no `|`
/// and no control characters.
bool is_wire_text(std::string_view s) noexcept;

/// Decimal with exactly `decimals` fractional digits, optional leading `-`,
/// no leading zeros in the integer part.
std::optional<double> parse_fixed(std::string_view s, int decimals) noexcept;
std::string format_fixed(double v, int decimals);

/// Non-negative integer without sign or leading zeros.
std::optional<long long> parse_uint(std::string_view s, std::size_t max_digits = 18) noexcept;

/// Reversible single-line escaping for arbitrary bytes (`%XX` for control,
/// non-ASCII and `%`).
std::string percent_escape(std::string_view raw);
std::optional<std::string> percent_unescape(std::string_view escaped);

std::string_view trim(std::string_view s) noexcept;

}  // namespace materna::text
