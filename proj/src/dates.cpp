#include "torcast/dates.hpp"

#include <cctype>
#include <cstdio>

#include "torcast/errors.hpp"

namespace torcast {

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
    if (from + count > s.size()) return false;
    for (std::size_t i = from; i < from + count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

int days_in_month(int year, int month) {
    static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[month - 1];
}

void check_date(const Date& d, const std::string& text) {
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month)) {
        throw ArgumentError("invalid calendar date: " + text);
    }
}

}  // namespace

Date parse_date(const std::string& text) {
    Date d;
    if (text.size() == 10 && text[4] == '-' && text[7] == '-' &&
        all_digits(text, 0, 4) && all_digits(text, 5, 2) && all_digits(text, 8, 2)) {
        d.year = std::stoi(text.substr(0, 4));
        d.month = std::stoi(text.substr(5, 2));
        d.day = std::stoi(text.substr(8, 2));
    } else if (text.size() == 8 && all_digits(text, 0, 8)) {
        d.year = std::stoi(text.substr(0, 4));
        d.month = std::stoi(text.substr(4, 2));
        d.day = std::stoi(text.substr(6, 2));
    } else {
        throw ArgumentError("unrecognized date format: '" + text + "' (want YYYY-MM-DD or YYYYMMDD)");
    }
    check_date(d, text);
    return d;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::string format_date_compact(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d%02d%02d", d.year, d.month, d.day);
    return buf;
}

// Howard Hinnant's civil-days algorithm.
std::int64_t days_from_civil(const Date& d) {
    std::int64_t y = d.year;
    const int m = d.month;
    const int dd = d.day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + dd - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

namespace {

Date civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned dd = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(dd)};
}

}  // namespace

Date next_day(const Date& d) {
    return civil_from_days(days_from_civil(d) + 1);
}

UtcInstant parse_utc_timestamp(const std::string& text) {
    // YYYY-MM-DD[T ]HH:MM:SS[.frac][Z]
    if (text.size() < 19) throw DataError("timestamp too short: '" + text + "'");
    if (!(all_digits(text, 0, 4) && text[4] == '-' && all_digits(text, 5, 2) && text[7] == '-' &&
          all_digits(text, 8, 2) && (text[10] == 'T' || text[10] == ' ') &&
          all_digits(text, 11, 2) && text[13] == ':' && all_digits(text, 14, 2) &&
          text[16] == ':' && all_digits(text, 17, 2))) {
        throw DataError("malformed ISO-8601 timestamp: '" + text + "'");
    }
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t frac = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            ++frac;
        }
        if (frac == 0) throw DataError("malformed fractional seconds: '" + text + "'");
    }
    if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) ++pos;
    if (pos != text.size()) throw DataError("trailing characters in timestamp: '" + text + "'");

    Date d;
    d.year = std::stoi(text.substr(0, 4));
    d.month = std::stoi(text.substr(5, 2));
    d.day = std::stoi(text.substr(8, 2));
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month)) {
        throw DataError("invalid calendar date in timestamp: '" + text + "'");
    }
    const int hh = std::stoi(text.substr(11, 2));
    const int mm = std::stoi(text.substr(14, 2));
    const int ss = std::stoi(text.substr(17, 2));
    if (hh > 23 || mm > 59 || ss > 60) {
        throw DataError("invalid time of day in timestamp: '" + text + "'");
    }
    return days_from_civil(d) * 86400 + hh * 3600 + mm * 60 + ss;
}

std::string format_utc_timestamp(UtcInstant t) {
    std::int64_t days = t / 86400;
    std::int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    const Date d = civil_from_days(days);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", d.year, d.month, d.day,
                  static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

UtcInstant noon_utc(const Date& d) {
    return days_from_civil(d) * 86400 + 12 * 3600;
}

}  // namespace torcast
