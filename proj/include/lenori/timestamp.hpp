#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace lenori {

/// Wall-clock instant at one-minute resolution, in the single declared local zone of the data.
using Minutes = std::chrono::sys_time<std::chrono::minutes>;

/// Parses "YYYY-MM-DD HH:MM" (a trailing ":SS" is accepted and truncated to the minute).
/// A 'T' separator is also accepted. Returns nullopt on any malformed or out-of-range field.
auto parse_timestamp(std::string_view text) -> std::optional<Minutes>;

/// Formats as "YYYY-MM-DD HH:MM".
auto format_timestamp(Minutes t) -> std::string;

auto month_of(Minutes t) -> unsigned;
auto year_of(Minutes t) -> int;
auto year_start(int year) -> Minutes;

/// Length of a Julian year in minutes (365.25 days).
inline constexpr double kMinutesPerJulianYear = 365.25 * 24.0 * 60.0;

} // namespace lenori
