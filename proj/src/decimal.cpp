#include "susehr/decimal.hpp"

#include <algorithm>
#include <cstdlib>

namespace susehr {
namespace {

bool all_digits(std::string_view s) {
    if (s.empty())
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Builds the canonical text from sign + integer digits + fraction digits.
std::string canonicalize(bool negative, std::string_view int_part, std::string_view frac_part) {
    size_t int_start = 0;
    while (int_start + 1 < int_part.size() && int_part[int_start] == '0')
        ++int_start;
    std::string_view ip = int_part.substr(int_start);

    size_t frac_end = frac_part.size();
    while (frac_end > 0 && frac_part[frac_end - 1] == '0')
        --frac_end;
    std::string_view fp = frac_part.substr(0, frac_end);

    bool zero = (ip == "0" || ip.empty()) && fp.empty();
    std::string out;
    if (negative && !zero)
        out.push_back('-');
    out.append(ip.empty() ? "0" : std::string(ip));
    if (!fp.empty()) {
        out.push_back('.');
        out.append(fp);
    }
    return out;
}

} // namespace

std::optional<Decimal> Decimal::parse(std::string_view text) {
    bool negative = false;
    if (!text.empty() && text[0] == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    if (text.empty())
        return std::nullopt;

    auto dot = text.find('.');
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (!all_digits(int_part))
        return std::nullopt;
    if (dot != std::string_view::npos && !all_digits(frac_part))
        return std::nullopt;

    return Decimal(canonicalize(negative, int_part, frac_part));
}

Decimal Decimal::from_scaled(long long value, int scale) {
    bool negative = value < 0;
    unsigned long long mag = negative ? ~static_cast<unsigned long long>(value) + 1ULL
                                      : static_cast<unsigned long long>(value);
    std::string digits = std::to_string(mag);
    if (scale <= 0)
        return Decimal(canonicalize(negative, digits, {}));
    if (static_cast<int>(digits.size()) <= scale)
        digits.insert(0, static_cast<size_t>(scale) - digits.size() + 1, '0');
    std::string int_part = digits.substr(0, digits.size() - static_cast<size_t>(scale));
    std::string frac_part = digits.substr(digits.size() - static_cast<size_t>(scale));
    return Decimal(canonicalize(negative, int_part, frac_part));
}

int Decimal::fraction_digits() const {
    auto dot = text_.find('.');
    return dot == std::string::npos ? 0 : static_cast<int>(text_.size() - dot - 1);
}

int Decimal::compare(const Decimal& other) const {
    bool an = is_negative();
    bool bn = other.is_negative();
    if (an != bn)
        return an ? -1 : 1;

    auto split = [](const std::string& t) {
        std::string_view s(t);
        if (!s.empty() && s[0] == '-')
            s.remove_prefix(1);
        auto dot = s.find('.');
        std::string_view ip = s.substr(0, dot);
        std::string_view fp = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
        return std::pair(ip, fp);
    };
    auto [ai, af] = split(text_);
    auto [bi, bf] = split(other.text_);

    int mag = 0;
    if (ai.size() != bi.size())
        mag = ai.size() < bi.size() ? -1 : 1;
    else if (int c = ai.compare(bi); c != 0)
        mag = c < 0 ? -1 : 1;
    else {
        size_t n = std::max(af.size(), bf.size());
        for (size_t i = 0; i < n && mag == 0; ++i) {
            char ca = i < af.size() ? af[i] : '0';
            char cb = i < bf.size() ? bf[i] : '0';
            if (ca != cb)
                mag = ca < cb ? -1 : 1;
        }
    }
    return an ? -mag : mag;
}

Decimal Decimal::rounded(int precision) const {
    if (precision < 0)
        precision = 0;
    if (fraction_digits() <= precision)
        return *this;

    bool negative = is_negative();
    std::string_view s(text_);
    if (negative)
        s.remove_prefix(1);
    auto dot = s.find('.');
    std::string digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
    size_t keep = dot + static_cast<size_t>(precision); // digits kept after cutting
    char next = digits[keep];
    digits.resize(keep);
    if (next >= '5') { // half away from zero
        int carry = 1;
        for (size_t i = digits.size(); i-- > 0 && carry;) {
            int d = digits[i] - '0' + carry;
            digits[i] = static_cast<char>('0' + d % 10);
            carry = d / 10;
        }
        if (carry)
            digits.insert(digits.begin(), '1');
    }
    size_t int_len = digits.size() - static_cast<size_t>(precision);
    return Decimal(canonicalize(negative, std::string_view(digits).substr(0, int_len),
                                std::string_view(digits).substr(int_len)));
}

std::optional<std::string> Decimal::scaled_text(int scale) const {
    if (fraction_digits() > scale)
        return std::nullopt;
    bool negative = is_negative();
    std::string_view s(text_);
    if (negative)
        s.remove_prefix(1);
    auto dot = s.find('.');
    std::string digits = std::string(s.substr(0, dot == std::string_view::npos ? s.size() : dot));
    int frac = 0;
    if (dot != std::string_view::npos) {
        digits += std::string(s.substr(dot + 1));
        frac = static_cast<int>(s.size() - dot - 1);
    }
    digits.append(static_cast<size_t>(scale - frac), '0');
    size_t start = 0;
    while (start + 1 < digits.size() && digits[start] == '0')
        ++start;
    digits = digits.substr(start);
    if (digits == "0")
        negative = false;
    return negative ? "-" + digits : digits;
}

} // namespace susehr
