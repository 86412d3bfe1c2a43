#pragma once

#include <optional>
#include <string>
#include <vector>

#include "susehr/archetype_id.hpp"
#include "susehr/data_value.hpp"
#include "susehr/decimal.hpp"

namespace susehr {

enum class Origin { New, Specialized, Ckm };

const char* origin_name(Origin o);
std::optional<Origin> origin_from_name(std::string_view name);

enum class Occurrence { Required, Optional };

enum class Category {
    Procedures,
    Diagnosis,
    Laboratory,
    Physical,
    AdministrativeHcp,
    AdministrativeHospitalization,
    Demographic,
};

const char* category_name(Category c);
std::optional<Category> category_from_name(std::string_view name);

struct ValueRange {
    Decimal min;
    Decimal max;

    bool contains(const Decimal& v) const { return min.compare(v) <= 0 && v.compare(max) <= 0; }
};

// Constraint on a single leaf element of an archetype.
struct ElementConstraint {
    std::string name;
    ValueKind value_kind = ValueKind::Text;
    Occurrence occurrence = Occurrence::Optional;
    std::optional<std::string> units;          // Quantity only
    std::optional<std::string> code_system;    // CodedText only
    std::optional<ValueRange> range;           // Quantity/Count only
    std::optional<int> precision;              // Quantity only
    std::optional<ProportionKind> proportion_kind; // Proportion only
    Category category = Category::AdministrativeHcp;
};

struct ArchetypeDefinition {
    ArchetypeId id;
    Origin origin = Origin::New;
    std::optional<ArchetypeId> parent; // present iff origin == Specialized
    std::vector<ElementConstraint> elements;
    std::string description;

    const ElementConstraint* find_element(std::string_view name) const;
};

// Declares an out-of-set parent archetype so specialization chains resolve;
// stubs carry no elements and are excluded from every tally.
struct ArchetypeStub {
    ArchetypeId id;
};

struct TemplateSlot {
    ArchetypeId archetype;
    Occurrence occurrence = Occurrence::Optional;
};

struct TemplateDefinition {
    std::string id;
    ArchetypeId root; // COMPOSITION-typed
    std::vector<TemplateSlot> slots;
};

struct SchemaFile {
    std::vector<ArchetypeDefinition> archetypes;
    std::vector<ArchetypeStub> stubs;
    std::vector<TemplateDefinition> templates;

    bool empty() const { return archetypes.empty() && stubs.empty() && templates.empty(); }
};

// Parses one schema document (grammar in docs/schema-format.md). Unknown
// keys are rejected. Throws SchemaSyntaxError with "file:line" positions,
// or SchemaSemanticError for structurally valid but contradictory content
// (units on a boolean element, parent on a non-specialized archetype, ...).
SchemaFile parse_schema_file(std::string_view text, const std::string& filename = "<schema>");

} // namespace susehr
