#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "susehr/composition.hpp"

namespace susehr {

// Canonical document form: compact JSON, UTF-8, keys in lexicographic
// order, one normalized rendering per composition (see
// docs/composition-format.md). Round trip is exact:
// parse_composition(serialize_composition(c)) compares equal to c.
std::string serialize_composition(const Composition& c);

// Throws SyntaxError (malformed text, with line/column) or ModelError
// (well-formed text violating a model invariant, e.g. an ELEMENT with
// children or a percent proportion with denominator != 100).
Composition parse_composition(std::string_view document);

// Newline-delimited composition datasets.
void write_composition_line(std::ostream& out, const Composition& c);

} // namespace susehr
