#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace egolayers {

// Timestamp parsing/formatting on unix seconds, independent of the C locale
// and the host time zone. Accepted forms:
//   2020-01-01                     (midnight UTC)
//   2020-01-01T13:05:59            (UTC assumed)
//   2020-01-01 13:05:59Z
//   2020-01-01T13:05:59+02:00 / -0500
// Fractional seconds are truncated.
std::optional<std::int64_t> parse_iso8601(std::string_view s);

/// Digits-only unix seconds (optional leading '-').
std::optional<std::int64_t> parse_unix_seconds(std::string_view s);

enum class TimestampFormat { iso8601, unix_seconds, automatic };

std::optional<std::int64_t> parse_timestamp(std::string_view s, TimestampFormat fmt);

std::string format_iso8601(std::int64_t unix_seconds);

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day);

}  // namespace egolayers
