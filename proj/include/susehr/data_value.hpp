#pragma once

#include <optional>
#include <string>
#include <variant>

#include "susehr/decimal.hpp"

namespace susehr {

// The eight data-value kinds carried by claim compositions.
enum class ValueKind {
    Quantity,
    Count,
    Boolean,
    Text,
    CodedText,
    Date,
    DateTime,
    Proportion,
};

const char* value_kind_name(ValueKind k);              // "quantity", "coded_text", ...
const char* value_kind_rm_name(ValueKind k);           // "DV_QUANTITY", "DV_CODED_TEXT", ...
std::optional<ValueKind> value_kind_from_name(std::string_view name);

enum class ProportionKind { Ratio, Percent, Fraction };

const char* proportion_kind_name(ProportionKind k);
std::optional<ProportionKind> proportion_kind_from_name(std::string_view name);

struct DvQuantity {
    Decimal magnitude;
    std::string units;
    std::optional<int> precision;

    bool operator==(const DvQuantity&) const = default;
};

struct DvCount {
    long long magnitude = 0;

    bool operator==(const DvCount&) const = default;
};

struct DvBoolean {
    bool value = false;

    bool operator==(const DvBoolean&) const = default;
};

struct DvText {
    std::string value;

    bool operator==(const DvText&) const = default;
};

struct DvCodedText {
    std::string value;          // display label
    std::string terminology_id;
    std::string code;

    bool operator==(const DvCodedText&) const = default;
};

struct DvDate {
    std::string value; // validated ISO-8601 calendar date, kept verbatim

    bool operator==(const DvDate&) const = default;
};

struct DvDateTime {
    std::string value; // validated ISO-8601 date-time, kept verbatim

    bool operator==(const DvDateTime&) const = default;
};

struct DvProportion {
    Decimal numerator;
    Decimal denominator;
    ProportionKind kind = ProportionKind::Ratio;

    bool operator==(const DvProportion&) const = default;
};

using DataValue = std::variant<DvQuantity, DvCount, DvBoolean, DvText, DvCodedText, DvDate,
                               DvDateTime, DvProportion>;

ValueKind kind_of(const DataValue& v);

// Validating factories; each throws ModelError on an invariant violation
// (empty units, percent proportion without denominator 100, unparseable
// date text, ...). Construction is the only validation point, so anything
// downstream can assume well-formed values.
DataValue make_quantity(std::string_view magnitude, std::string units,
                        std::optional<int> precision = std::nullopt);
DataValue make_count(long long magnitude);
DataValue make_boolean(bool value);
DataValue make_text(std::string value);
DataValue make_coded_text(std::string display, std::string terminology_id, std::string code);
DataValue make_date(std::string iso_date);
DataValue make_date_time(std::string iso_date_time);
DataValue make_proportion(std::string_view numerator, std::string_view denominator,
                          ProportionKind kind);

// Structural equality; quantities with equal declared precision compare on
// magnitudes rounded at that precision.
bool values_equal(const DataValue& a, const DataValue& b);

} // namespace susehr
