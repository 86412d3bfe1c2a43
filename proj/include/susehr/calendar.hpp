#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace susehr {

struct CivilDate {
    int year = 1970;
    int month = 1;
    int day = 1;

    bool operator==(const CivilDate&) const = default;
};

struct CivilTime {
    int hour = 0;
    int minute = 0;
    int second = 0;

    bool operator==(const CivilTime&) const = default;
};

struct CivilDateTime {
    CivilDate date;
    CivilTime time;
    std::string offset; // "", "Z", or "+HH:MM"/"-HH:MM"

    bool operator==(const CivilDateTime&) const = default;
};

bool is_valid_date(const CivilDate& d);

// Days since 1970-01-01 and back (proleptic Gregorian).
long days_from_civil(const CivilDate& d);
CivilDate civil_from_days(long days);

// Strict ISO-8601 calendar date: YYYY-MM-DD.
std::optional<CivilDate> parse_iso_date(std::string_view text);
std::string render_iso_date(const CivilDate& d);

// ISO-8601 date-time: YYYY-MM-DDThh:mm[:ss][Z|+hh:mm|-hh:mm].
std::optional<CivilDateTime> parse_iso_date_time(std::string_view text);
std::string render_iso_date_time(const CivilDateTime& dt);

// Format strings for source-record transforms: the tokens yyyy, MM, dd,
// HH, mm, ss match fixed-width digit runs; every other character matches
// itself. The whole input must be consumed.
std::optional<CivilDateTime> parse_with_format(std::string_view raw, std::string_view format);
std::optional<std::string> render_with_format(const CivilDateTime& dt, std::string_view format);
bool format_has_time(std::string_view format);

} // namespace susehr
