#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace susehr {

// Arbitrary-precision decimal kept in a canonical text form so that values
// survive serialization round trips byte-for-byte. No floating point is
// involved at any step.
//
// Canonical form: optional '-', integer digits without leading zeros,
// optional '.' plus fraction digits without trailing zeros. Zero is "0"
// (never "-0").
class Decimal {
public:
    Decimal() = default;

    // Accepts [-]digits[.digits]; normalizes redundant zeros. Rejects
    // anything else (empty, lone '-', leading/trailing '.', exponents).
    static std::optional<Decimal> parse(std::string_view text);

    // value * 10^-scale, e.g. from_scaled(704, 1) == 70.4
    static Decimal from_scaled(long long value, int scale);

    const std::string& text() const { return text_; }

    // -1 / 0 / +1, numeric order.
    int compare(const Decimal& other) const;

    // Round half away from zero to `precision` fraction digits, then
    // re-canonicalize (so rounded(70.04, 1).text() == "70").
    Decimal rounded(int precision) const;

    // Digits of value * 10^scale as a plain integer string ("70.4" at
    // scale 2 -> "7040"). Requires the value to have at most `scale`
    // fraction digits.
    std::optional<std::string> scaled_text(int scale) const;

    int fraction_digits() const;
    bool is_negative() const { return !text_.empty() && text_[0] == '-'; }

    bool operator==(const Decimal& other) const { return text_ == other.text_; }
    bool operator!=(const Decimal& other) const { return text_ != other.text_; }

private:
    explicit Decimal(std::string canonical) : text_(std::move(canonical)) {}

    std::string text_ = "0";
};

} // namespace susehr
