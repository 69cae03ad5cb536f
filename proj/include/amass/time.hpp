#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace amass {

/// UTC instant at one-second resolution.
using TimePoint = std::chrono::sys_seconds;
/// UTC calendar date; as a cut-off it means 00:00:00 UTC of that day.
using Date = std::chrono::sys_days;

/// Parses `YYYY-MM-DD`. Returns nullopt on any syntax or calendar error.
std::optional<Date> parse_date(std::string_view text);

/// Parses `YYYY-MM-DDTHH:MM:SSZ` (the only form this project writes).
std::optional<TimePoint> parse_rfc3339(std::string_view text);

std::string format_date(Date d);
std::string format_rfc3339(TimePoint t);

inline TimePoint start_of(Date d) { return TimePoint{d}; }
inline Date floor_day(TimePoint t) { return std::chrono::floor<std::chrono::days>(t); }

/// Number of ISO-8601 weeks (52 or 53) in the given ISO week-numbering year.
unsigned iso_weeks_in_year(int year);

/// Monday of ISO week `week` of `year`; nullopt if the week does not exist.
std::optional<Date> iso_week_monday(int year, unsigned week);

}  // namespace amass
