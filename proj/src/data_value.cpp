#include "susehr/data_value.hpp"

#include <array>

#include "susehr/calendar.hpp"
#include "susehr/errors.hpp"

namespace susehr {
namespace {

constexpr std::array<const char*, 8> kKindNames = {
    "quantity", "count", "boolean", "text", "coded_text", "date", "date_time", "proportion"};
constexpr std::array<const char*, 8> kRmNames = {
    "DV_QUANTITY", "DV_COUNT", "DV_BOOLEAN", "DV_TEXT",
    "DV_CODED_TEXT", "DV_DATE", "DV_DATE_TIME", "DV_PROPORTION"};
constexpr std::array<const char*, 3> kProportionNames = {"ratio", "percent", "fraction"};

} // namespace

const char* value_kind_name(ValueKind k) {
    return kKindNames[static_cast<size_t>(k)];
}

const char* value_kind_rm_name(ValueKind k) {
    return kRmNames[static_cast<size_t>(k)];
}

std::optional<ValueKind> value_kind_from_name(std::string_view name) {
    for (size_t i = 0; i < kKindNames.size(); ++i)
        if (name == kKindNames[i])
            return static_cast<ValueKind>(i);
    return std::nullopt;
}

const char* proportion_kind_name(ProportionKind k) {
    return kProportionNames[static_cast<size_t>(k)];
}

std::optional<ProportionKind> proportion_kind_from_name(std::string_view name) {
    for (size_t i = 0; i < kProportionNames.size(); ++i)
        if (name == kProportionNames[i])
            return static_cast<ProportionKind>(i);
    return std::nullopt;
}

ValueKind kind_of(const DataValue& v) {
    return static_cast<ValueKind>(v.index());
}

DataValue make_quantity(std::string_view magnitude, std::string units,
                        std::optional<int> precision) {
    auto mag = Decimal::parse(magnitude);
    if (!mag)
        throw ModelError("quantity magnitude is not a decimal number: '" + std::string(magnitude) + "'");
    if (units.empty())
        throw ModelError("quantity units must be non-empty");
    if (precision && *precision < 0)
        throw ModelError("quantity precision must be >= 0");
    return DvQuantity{*mag, std::move(units), precision};
}

DataValue make_count(long long magnitude) {
    return DvCount{magnitude};
}

DataValue make_boolean(bool value) {
    return DvBoolean{value};
}

DataValue make_text(std::string value) {
    if (value.empty())
        throw ModelError("text value must be non-empty");
    return DvText{std::move(value)};
}

DataValue make_coded_text(std::string display, std::string terminology_id, std::string code) {
    if (terminology_id.empty())
        throw ModelError("coded text terminology_id must be non-empty");
    if (code.empty())
        throw ModelError("coded text code must be non-empty");
    return DvCodedText{std::move(display), std::move(terminology_id), std::move(code)};
}

DataValue make_date(std::string iso_date) {
    if (!parse_iso_date(iso_date))
        throw ModelError("not an ISO-8601 calendar date: '" + iso_date + "'");
    return DvDate{std::move(iso_date)};
}

DataValue make_date_time(std::string iso_date_time) {
    if (!parse_iso_date_time(iso_date_time))
        throw ModelError("not an ISO-8601 date-time: '" + iso_date_time + "'");
    return DvDateTime{std::move(iso_date_time)};
}

DataValue make_proportion(std::string_view numerator, std::string_view denominator,
                          ProportionKind kind) {
    auto num = Decimal::parse(numerator);
    auto den = Decimal::parse(denominator);
    if (!num || !den)
        throw ModelError("proportion parts must be decimal numbers");
    static const Decimal zero = *Decimal::parse("0");
    static const Decimal hundred = *Decimal::parse("100");
    if (den->compare(zero) == 0)
        throw ModelError("proportion denominator must not be 0");
    if (kind == ProportionKind::Percent && den->compare(hundred) != 0)
        throw ModelError("percent proportion requires denominator 100");
    return DvProportion{*num, *den, kind};
}

bool values_equal(const DataValue& a, const DataValue& b) {
    if (a.index() != b.index())
        return false;
    if (kind_of(a) == ValueKind::Quantity) {
        const auto& qa = std::get<DvQuantity>(a);
        const auto& qb = std::get<DvQuantity>(b);
        if (qa.units != qb.units || qa.precision != qb.precision)
            return false;
        if (qa.precision)
            return qa.magnitude.rounded(*qa.precision) == qb.magnitude.rounded(*qb.precision);
        return qa.magnitude == qb.magnitude;
    }
    return a == b;
}

} // namespace susehr
