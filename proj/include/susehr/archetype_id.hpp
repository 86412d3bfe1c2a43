#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "susehr/composition.hpp"

namespace susehr {

// Decomposed openEHR archetype identifier,
// openEHR-EHR-<rm_type>.<concept>[-<spec>...].v<version>.
// render(parse(text)) reproduces the source text exactly.
struct ArchetypeId {
    NodeKind rm_type = NodeKind::Observation;
    std::string concept_name;
    std::vector<std::string> specializations;
    int version = 1;

    std::string render() const;

    // Concept chain "<concept>[-<spec>...]", e.g. "lab_test-urea_and_electrolytes-sus".
    std::string concept_chain() const;

    // Id of the direct parent (one specialization segment dropped);
    // requires at least one specialization.
    ArchetypeId parent() const;

    bool operator==(const ArchetypeId&) const = default;
};

// Throws IdSyntaxError on wrong prefix, unsupported rm_type, empty segment,
// or missing/invalid version.
ArchetypeId parse_archetype_id(std::string_view text);

} // namespace susehr
