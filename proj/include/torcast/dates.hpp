#pragma once

#include <cstdint>
#include <string>

namespace torcast {

/// Calendar day, UTC. Comparable and hashable by value.
struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31

    auto operator<=>(const Date&) const = default;
};

/// Parses "YYYY-MM-DD" or "YYYYMMDD". Throws ArgumentError on malformed input.
Date parse_date(const std::string& text);

std::string format_date(const Date& d);          // "YYYY-MM-DD"
std::string format_date_compact(const Date& d);  // "YYYYMMDD"

Date next_day(const Date& d);

/// Days since 1970-01-01 (proleptic Gregorian).
std::int64_t days_from_civil(const Date& d);

/// Seconds since the Unix epoch, UTC.
using UtcInstant = std::int64_t;

/// Parses an ISO-8601 UTC timestamp: "YYYY-MM-DDTHH:MM:SS" with optional
/// trailing 'Z' and optional fractional seconds (truncated). A space is
/// accepted in place of 'T'. Throws DataError on malformed input.
UtcInstant parse_utc_timestamp(const std::string& text);

std::string format_utc_timestamp(UtcInstant t);

/// 12:00 UTC on the given date (start of a forecast verification window).
UtcInstant noon_utc(const Date& d);

}  // namespace torcast
