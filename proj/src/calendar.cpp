#include "susehr/calendar.hpp"

#include <array>
#include <cstdio>

namespace susehr {
namespace {

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y))
        return 29;
    return lengths[static_cast<size_t>(m - 1)];
}

// Reads exactly `n` digits from text at pos; advances pos.
std::optional<int> read_digits(std::string_view text, size_t& pos, size_t n) {
    if (pos + n > text.size())
        return std::nullopt;
    int value = 0;
    for (size_t i = 0; i < n; ++i) {
        char c = text[pos + i];
        if (c < '0' || c > '9')
            return std::nullopt;
        value = value * 10 + (c - '0');
    }
    pos += n;
    return value;
}

bool parse_offset(std::string_view text, size_t& pos, std::string& out) {
    if (pos >= text.size())
        return true; // no offset
    char c = text[pos];
    if (c == 'Z') {
        out = "Z";
        ++pos;
        return true;
    }
    if (c != '+' && c != '-')
        return false;
    size_t start = pos;
    ++pos;
    auto hh = read_digits(text, pos, 2);
    if (!hh || *hh > 14 || pos >= text.size() || text[pos] != ':')
        return false;
    ++pos;
    auto mm = read_digits(text, pos, 2);
    if (!mm || *mm > 59)
        return false;
    out = std::string(text.substr(start, pos - start));
    return true;
}

} // namespace

bool is_valid_date(const CivilDate& d) {
    return d.year >= 1 && d.year <= 9999 && d.month >= 1 && d.month <= 12 && d.day >= 1 &&
           d.day <= days_in_month(d.year, d.month);
}

// Howard Hinnant's civil-days algorithm.
long days_from_civil(const CivilDate& d) {
    int y = d.year - (d.month <= 2);
    long era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = static_cast<unsigned>((153 * (d.month + (d.month > 2 ? -3 : 9)) + 2) / 5 + d.day - 1);
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

CivilDate civil_from_days(long days) {
    long z = days + 719468;
    long era = (z >= 0 ? z : z - 146096) / 146097;
    unsigned doe = static_cast<unsigned>(z - era * 146097);
    unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    long y = static_cast<long>(yoe) + era * 400;
    unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    unsigned mp = (5 * doy + 2) / 153;
    unsigned d = doy - (153 * mp + 2) / 5 + 1;
    unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

std::optional<CivilDate> parse_iso_date(std::string_view text) {
    size_t pos = 0;
    auto y = read_digits(text, pos, 4);
    if (!y || pos >= text.size() || text[pos] != '-')
        return std::nullopt;
    ++pos;
    auto m = read_digits(text, pos, 2);
    if (!m || pos >= text.size() || text[pos] != '-')
        return std::nullopt;
    ++pos;
    auto d = read_digits(text, pos, 2);
    if (!d || pos != text.size())
        return std::nullopt;
    CivilDate date{*y, *m, *d};
    if (!is_valid_date(date))
        return std::nullopt;
    return date;
}

std::string render_iso_date(const CivilDate& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::optional<CivilDateTime> parse_iso_date_time(std::string_view text) {
    auto t = text.find('T');
    if (t == std::string_view::npos)
        return std::nullopt;
    auto date = parse_iso_date(text.substr(0, t));
    if (!date)
        return std::nullopt;
    std::string_view rest = text.substr(t + 1);
    size_t pos = 0;
    auto hh = read_digits(rest, pos, 2);
    if (!hh || *hh > 23 || pos >= rest.size() || rest[pos] != ':')
        return std::nullopt;
    ++pos;
    auto mm = read_digits(rest, pos, 2);
    if (!mm || *mm > 59)
        return std::nullopt;
    int ss = 0;
    if (pos < rest.size() && rest[pos] == ':') {
        ++pos;
        auto s = read_digits(rest, pos, 2);
        if (!s || *s > 59)
            return std::nullopt;
        ss = *s;
    }
    std::string offset;
    if (!parse_offset(rest, pos, offset) || pos != rest.size())
        return std::nullopt;
    return CivilDateTime{*date, CivilTime{*hh, *mm, ss}, offset};
}

std::string render_iso_date_time(const CivilDateTime& dt) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d", dt.date.year, dt.date.month,
                  dt.date.day, dt.time.hour, dt.time.minute, dt.time.second);
    return buf + dt.offset;
}

namespace {

struct FormatToken {
    char kind;   // 'y','M','d','H','m','s' or 0 for literal
    size_t len;  // digit count, or 1 for literal
    char literal;
};

std::optional<FormatToken> next_token(std::string_view format, size_t& pos) {
    if (pos >= format.size())
        return std::nullopt;
    char c = format[pos];
    auto run = [&](char ch) {
        size_t n = 0;
        while (pos + n < format.size() && format[pos + n] == ch)
            ++n;
        return n;
    };
    switch (c) {
    case 'y': case 'M': case 'd': case 'H': case 'm': case 's': {
        size_t n = run(c);
        pos += n;
        return FormatToken{c, n, 0};
    }
    default:
        ++pos;
        return FormatToken{0, 1, c};
    }
}

} // namespace

bool format_has_time(std::string_view format) {
    size_t pos = 0;
    while (auto tok = next_token(format, pos))
        if (tok->kind == 'H' || tok->kind == 'm' || tok->kind == 's')
            return true;
    return false;
}

std::optional<CivilDateTime> parse_with_format(std::string_view raw, std::string_view format) {
    CivilDateTime dt;
    size_t fpos = 0;
    size_t rpos = 0;
    while (auto tok = next_token(format, fpos)) {
        if (tok->kind == 0) {
            if (rpos >= raw.size() || raw[rpos] != tok->literal)
                return std::nullopt;
            ++rpos;
            continue;
        }
        auto value = read_digits(raw, rpos, tok->len);
        if (!value)
            return std::nullopt;
        switch (tok->kind) {
        case 'y': dt.date.year = *value; break;
        case 'M': dt.date.month = *value; break;
        case 'd': dt.date.day = *value; break;
        case 'H': dt.time.hour = *value; break;
        case 'm': dt.time.minute = *value; break;
        case 's': dt.time.second = *value; break;
        }
    }
    if (rpos != raw.size() || !is_valid_date(dt.date))
        return std::nullopt;
    if (dt.time.hour > 23 || dt.time.minute > 59 || dt.time.second > 59)
        return std::nullopt;
    return dt;
}

std::optional<std::string> render_with_format(const CivilDateTime& dt, std::string_view format) {
    std::string out;
    size_t fpos = 0;
    while (auto tok = next_token(format, fpos)) {
        if (tok->kind == 0) {
            out.push_back(tok->literal);
            continue;
        }
        int value = 0;
        switch (tok->kind) {
        case 'y': value = dt.date.year; break;
        case 'M': value = dt.date.month; break;
        case 'd': value = dt.date.day; break;
        case 'H': value = dt.time.hour; break;
        case 'm': value = dt.time.minute; break;
        case 's': value = dt.time.second; break;
        }
        std::string digits = std::to_string(value);
        if (digits.size() > tok->len)
            return std::nullopt; // field too narrow, e.g. year in "yy"
        out.append(tok->len - digits.size(), '0');
        out += digits;
    }
    return out;
}

} // namespace susehr
