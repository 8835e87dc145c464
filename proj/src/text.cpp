#include "qualex/text.hpp"

#include "qualex/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <ctime>

namespace qualex {

std::string sanitize_utf8(std::string_view bytes) {
    static constexpr std::string_view replacement = "\xEF\xBF\xBD";
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        auto c = static_cast<unsigned char>(bytes[i]);
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            out += replacement;
            ++i;
            continue;
        }
        bool ok = i + len <= n;
        for (std::size_t k = 1; ok && k < len; ++k) {
            auto cc = static_cast<unsigned char>(bytes[i + k]);
            if ((cc & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (ok) {
            // Reject overlong forms, surrogates and out-of-range code points.
            static constexpr std::array<std::uint32_t, 5> min_cp{0, 0, 0x80, 0x800, 0x10000};
            ok = cp >= min_cp[len] && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
        }
        if (ok) {
            out.append(bytes.substr(i, len));
            i += len;
        } else {
            out += replacement;
            ++i;
        }
    }
    return out;
}

std::string trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(c >= 'A' && c <= 'Z' ? c + ('a' - 'A') : c);
    });
    return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.emplace_back(s.substr(start));
            break;
        }
        parts.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
    std::int64_t y;
    unsigned m;
    unsigned d;
};

Civil civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return {y + (m <= 2), m, d};
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// 0 = Monday ... 6 = Sunday
int weekday_from_days(std::int64_t days) {
    return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

} // namespace

std::string format_iso8601(std::int64_t t) {
    const std::int64_t days = floor_div(t, 86400);
    const std::int64_t secs = t - days * 86400;
    const Civil c = civil_from_days(days);
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(c.y), c.m, c.d, static_cast<long long>(secs / 3600),
                  static_cast<long long>((secs / 60) % 60), static_cast<long long>(secs % 60));
    return buf.data();
}

std::int64_t parse_iso8601(std::string_view text) {
    auto fail = [&]() -> ConfigError {
        return ConfigError("malformed ISO-8601 timestamp: '" + std::string(text) + "'");
    };
    std::size_t pos = 0;
    auto read_int = [&](std::size_t digits) -> int {
        if (pos + digits > text.size()) throw fail();
        int v = 0;
        for (std::size_t k = 0; k < digits; ++k) {
            char c = text[pos + k];
            if (c < '0' || c > '9') throw fail();
            v = v * 10 + (c - '0');
        }
        pos += digits;
        return v;
    };
    auto expect = [&](char c) {
        if (pos >= text.size() || text[pos] != c) throw fail();
        ++pos;
    };
    int year = read_int(4);
    expect('-');
    int month = read_int(2);
    expect('-');
    int day = read_int(2);
    int hh = 0, mm = 0, ss = 0;
    std::int64_t offset = 0;
    if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
        ++pos;
        hh = read_int(2);
        expect(':');
        mm = read_int(2);
        if (pos < text.size() && text[pos] == ':') {
            ++pos;
            ss = read_int(2);
        }
        if (pos < text.size()) {
            char c = text[pos];
            if (c == 'Z') {
                ++pos;
            } else if (c == '+' || c == '-') {
                ++pos;
                int oh = read_int(2);
                if (pos < text.size() && text[pos] == ':') ++pos;
                int om = read_int(2);
                offset = (c == '+' ? 1 : -1) * (oh * 3600 + om * 60);
            }
        }
    }
    if (pos != text.size() || month < 1 || month > 12 || day < 1 || day > 31 || hh > 23 || mm > 59 || ss > 60)
        throw fail();
    return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 + hh * 3600 +
           mm * 60 + ss - offset;
}

std::int64_t iso_week_start(std::int64_t t) {
    const std::int64_t days = floor_div(t, 86400);
    return (days - weekday_from_days(days)) * 86400;
}

std::string iso_week_label(std::int64_t t) {
    const std::int64_t days = floor_div(t, 86400);
    // The ISO year is the year of the Thursday in the same week.
    const std::int64_t thursday = days - weekday_from_days(days) + 3;
    const Civil c = civil_from_days(thursday);
    const std::int64_t jan1 = days_from_civil(c.y, 1, 1);
    const std::int64_t week = (thursday - jan1) / 7 + 1;
    std::array<char, 48> buf{};
    std::snprintf(buf.data(), buf.size(), "%04lld-W%02lld", static_cast<long long>(c.y),
                  static_cast<long long>(week));
    return buf.data();
}

std::string normalize_repo_path(std::string_view path) {
    std::string unified(path);
    std::replace(unified.begin(), unified.end(), '\\', '/');
    std::vector<std::string> out;
    for (auto& seg : split(unified, '/')) {
        if (seg.empty() || seg == ".") continue;
        if (seg == "..") {
            if (out.empty()) return {};
            out.pop_back();
            continue;
        }
        out.push_back(std::move(seg));
    }
    std::string joined;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i) joined.push_back('/');
        joined += out[i];
    }
    return joined;
}

} // namespace qualex
