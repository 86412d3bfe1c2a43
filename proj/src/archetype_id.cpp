#include "susehr/archetype_id.hpp"

#include "susehr/errors.hpp"

namespace susehr {
namespace {

constexpr std::string_view kPrefix = "openEHR-EHR-";

bool valid_segment(std::string_view seg) {
    if (seg.empty())
        return false;
    for (char c : seg)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'))
            return false;
    return true;
}

} // namespace

std::string ArchetypeId::concept_chain() const {
    std::string chain = concept_name;
    for (const auto& s : specializations) {
        chain.push_back('-');
        chain += s;
    }
    return chain;
}

std::string ArchetypeId::render() const {
    return std::string(kPrefix) + node_kind_name(rm_type) + "." + concept_chain() + ".v" +
           std::to_string(version);
}

ArchetypeId ArchetypeId::parent() const {
    if (specializations.empty())
        throw IdSyntaxError("archetype id '" + render() + "' has no specialization to drop");
    ArchetypeId p = *this;
    p.specializations.pop_back();
    return p;
}

ArchetypeId parse_archetype_id(std::string_view text) {
    if (text.substr(0, kPrefix.size()) != kPrefix)
        throw IdSyntaxError("archetype id must start with '" + std::string(kPrefix) + "': '" +
                            std::string(text) + "'");
    std::string_view rest = text.substr(kPrefix.size());

    auto dot = rest.find('.');
    if (dot == std::string_view::npos)
        throw IdSyntaxError("archetype id missing concept: '" + std::string(text) + "'");
    std::string_view rm_name = rest.substr(0, dot);
    auto rm = node_kind_from_name(rm_name);
    if (!rm || *rm == NodeKind::Element)
        throw IdSyntaxError("unsupported rm_type '" + std::string(rm_name) + "' in '" +
                            std::string(text) + "'");
    rest.remove_prefix(dot + 1);

    auto vdot = rest.rfind(".v");
    if (vdot == std::string_view::npos || vdot == 0)
        throw IdSyntaxError("archetype id missing version: '" + std::string(text) + "'");
    std::string_view version_digits = rest.substr(vdot + 2);
    if (version_digits.empty())
        throw IdSyntaxError("archetype id missing version number: '" + std::string(text) + "'");
    int version = 0;
    for (char c : version_digits) {
        if (c < '0' || c > '9')
            throw IdSyntaxError("invalid version '" + std::string(version_digits) + "' in '" +
                                std::string(text) + "'");
        version = version * 10 + (c - '0');
    }
    if (version < 1)
        throw IdSyntaxError("archetype version must be positive: '" + std::string(text) + "'");

    std::string_view chain = rest.substr(0, vdot);
    if (chain.find('.') != std::string_view::npos)
        throw IdSyntaxError("unexpected '.' in concept chain of '" + std::string(text) + "'");

    ArchetypeId id;
    id.rm_type = *rm;
    id.version = version;
    size_t start = 0;
    bool first = true;
    while (start <= chain.size()) {
        auto hy = chain.find('-', start);
        std::string_view seg =
            chain.substr(start, hy == std::string_view::npos ? chain.size() - start : hy - start);
        if (!valid_segment(seg))
            throw IdSyntaxError("empty or invalid segment in '" + std::string(text) + "'");
        if (first) {
            id.concept_name = std::string(seg);
            first = false;
        } else {
            id.specializations.emplace_back(seg);
        }
        if (hy == std::string_view::npos)
            break;
        start = hy + 1;
    }
    return id;
}

} // namespace susehr
