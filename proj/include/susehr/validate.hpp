#pragma once

#include <string>
#include <vector>

#include "susehr/composition.hpp"
#include "susehr/registry.hpp"
#include "susehr/terminology.hpp"

namespace susehr {

struct Violation {
    std::string path;       // "<archetype id>/<element name>" or "<archetype id>"
    std::string constraint; // "slot-membership", "value-kind", "range", ...
    std::string archetype;  // archetype provenance of the constraint
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_text() const; // one violation per line
};

// Checks c against the named template: root archetype, slot membership and
// required slots, element-name existence, value-kind match, required
// elements, units, ranges, and code-system membership (via terminology).
// An empty report means valid. Throws UnknownTemplateError when the
// template is not in the registry.
ValidationReport validate_composition(const Composition& c, const std::string& template_id,
                                      const Registry& registry, const Terminology& terminology);

} // namespace susehr
