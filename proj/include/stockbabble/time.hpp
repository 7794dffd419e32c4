#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace stockbabble {

using Date = std::chrono::sys_days;
using Instant = std::chrono::sys_seconds;

// Injectable wall clock. Tests pin time with a lambda.
using Clock = std::function<Instant()>;

Instant system_now();

// Strict ISO-8601 calendar date, "YYYY-MM-DD".
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

// RFC 3339 timestamp; fractional seconds are truncated, offsets folded to UTC.
std::optional<Instant> parse_rfc3339(std::string_view text);
// Always emits "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(Instant instant);

}  // namespace stockbabble
