#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace censorlens {

using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM:SS[.fff]Z` (a `+00:00` suffix is also accepted).
/// Fractional seconds are truncated.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601(Timestamp t);

inline double minutes_between(Timestamp from, Timestamp to) {
  return std::chrono::duration<double, std::ratio<60>>(to - from).count();
}

}  // namespace censorlens
