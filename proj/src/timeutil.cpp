#include "egolayers/timeutil.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "egolayers/types.hpp"

namespace egolayers {

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);                 // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;       // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;                // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, unsigned& month, unsigned& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);              // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);              // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                                   // [0, 11]
    day = doy - (153 * mp + 2) / 5 + 1;
    month = mp + (mp < 10 ? 3 : -9);
    year = static_cast<int>(y + (month <= 2));
}

namespace {

bool parse_uint(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
    if (pos + len > s.size()) return false;
    unsigned v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + static_cast<unsigned>(c - '0');
    }
    out = v;
    return true;
}

bool valid_date(unsigned y, unsigned mo, unsigned d) {
    if (mo < 1 || mo > 12 || d < 1) return false;
    static constexpr std::array<unsigned, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                       31, 31, 30, 31, 30, 31};
    unsigned dmax = kDays[mo - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (mo == 2 && leap) dmax = 29;
    return d <= dmax;
}

}  // namespace

std::optional<std::int64_t> parse_iso8601(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);

    unsigned y, mo, d;
    if (!parse_uint(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || s[7] != '-' ||
        !parse_uint(s, 5, 2, mo) || !parse_uint(s, 8, 2, d) || !valid_date(y, mo, d)) {
        return std::nullopt;
    }

    unsigned hh = 0, mi = 0, ss = 0;
    std::size_t pos = 10;
    if (pos < s.size()) {
        if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') return std::nullopt;
        ++pos;
        if (!parse_uint(s, pos, 2, hh) || pos + 5 > s.size() || s[pos + 2] != ':' ||
            !parse_uint(s, pos + 3, 2, mi)) {
            return std::nullopt;
        }
        pos += 5;
        if (pos < s.size() && s[pos] == ':') {
            if (!parse_uint(s, pos + 1, 2, ss)) return std::nullopt;
            pos += 3;
        }
        if (hh > 23 || mi > 59 || ss > 60) return std::nullopt;
        if (ss == 60) ss = 59;  // leap second clamp
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        }
    }

    std::int64_t offset = 0;
    if (pos < s.size()) {
        const char c = s[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            unsigned oh, om = 0;
            if (!parse_uint(s, pos + 1, 2, oh)) return std::nullopt;
            std::size_t opos = pos + 3;
            if (opos < s.size() && s[opos] == ':') ++opos;
            if (opos < s.size()) {
                if (!parse_uint(s, opos, 2, om)) return std::nullopt;
                opos += 2;
            }
            if (oh > 14 || om > 59) return std::nullopt;
            offset = (c == '+' ? 1 : -1) * (static_cast<std::int64_t>(oh) * 3600 + om * 60);
            pos = opos;
        } else {
            return std::nullopt;
        }
    }
    if (pos != s.size()) return std::nullopt;

    const std::int64_t days = days_from_civil(static_cast<int>(y), mo, d);
    return days * kSecondsPerDay + hh * 3600 + mi * 60 + ss - offset;
}

std::optional<std::int64_t> parse_unix_seconds(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::int64_t> parse_timestamp(std::string_view s, TimestampFormat fmt) {
    switch (fmt) {
        case TimestampFormat::iso8601:
            return parse_iso8601(s);
        case TimestampFormat::unix_seconds:
            return parse_unix_seconds(s);
        case TimestampFormat::automatic: {
            if (auto v = parse_unix_seconds(s)) return v;
            return parse_iso8601(s);
        }
    }
    return std::nullopt;
}

std::string format_iso8601(std::int64_t t) {
    std::int64_t days = t / kSecondsPerDay;
    std::int64_t sod = t % kSecondsPerDay;
    if (sod < 0) {
        sod += kSecondsPerDay;
        --days;
    }
    int y;
    unsigned mo, d;
    civil_from_days(days, y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, mo, d,
                  static_cast<long long>(sod / 3600), static_cast<long long>((sod / 60) % 60),
                  static_cast<long long>(sod % 60));
    return buf;
}

std::string to_string(Direction d) {
    return d == Direction::outgoing ? "outgoing" : "incoming";
}

Direction direction_from_string(const std::string& s) {
    if (s == "outgoing") return Direction::outgoing;
    if (s == "incoming") return Direction::incoming;
    throw ConfigError("unknown direction: '" + s + "' (expected outgoing|incoming)");
}

}  // namespace egolayers
