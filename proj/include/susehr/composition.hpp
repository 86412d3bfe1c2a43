#pragma once

#include <optional>
#include <string>
#include <vector>

#include "susehr/data_value.hpp"

namespace susehr {

// Structure kinds of the reference-model subset. ELEMENT is the only leaf
// kind and the only kind carrying a DataValue.
enum class NodeKind {
    Composition,
    AdminEntry,
    Observation,
    Evaluation,
    Instruction,
    Action,
    Cluster,
    Element,
};

const char* node_kind_name(NodeKind k); // "COMPOSITION", "ADMIN_ENTRY", ...
std::optional<NodeKind> node_kind_from_name(std::string_view name);

struct InstanceNode {
    NodeKind kind = NodeKind::Element;
    std::optional<std::string> archetype_id; // present on archetype roots
    std::string name;
    std::optional<DataValue> value;   // ELEMENT only
    std::vector<InstanceNode> children; // empty iff ELEMENT
};

struct Composition {
    std::string archetype_id;
    std::string name;
    std::vector<InstanceNode> entries;
};

// Builders. These are the only construction path and enforce the kind
// discipline: ELEMENT carries a value and no children, everything else
// carries at least one child and no value, compositions have at least one
// entry and a well-formed archetype id. All throw ModelError.
InstanceNode make_element(std::string name, DataValue value);
InstanceNode make_node(NodeKind kind, std::string name, std::vector<InstanceNode> children,
                       std::optional<std::string> archetype_id = std::nullopt);
Composition make_composition(std::string archetype_id, std::string name,
                             std::vector<InstanceNode> entries);

// Structural equality ignoring serialization artifacts; data values
// compare via values_equal().
bool compare_compositions(const Composition& a, const Composition& b);

} // namespace susehr
