#include "susehr/composition.hpp"

#include <array>

#include "susehr/archetype_id.hpp"
#include "susehr/errors.hpp"

namespace susehr {
namespace {

constexpr std::array<const char*, 8> kNodeKindNames = {
    "COMPOSITION", "ADMIN_ENTRY", "OBSERVATION", "EVALUATION",
    "INSTRUCTION", "ACTION",      "CLUSTER",     "ELEMENT"};

} // namespace

const char* node_kind_name(NodeKind k) {
    return kNodeKindNames[static_cast<size_t>(k)];
}

std::optional<NodeKind> node_kind_from_name(std::string_view name) {
    for (size_t i = 0; i < kNodeKindNames.size(); ++i)
        if (name == kNodeKindNames[i])
            return static_cast<NodeKind>(i);
    return std::nullopt;
}

InstanceNode make_element(std::string name, DataValue value) {
    if (name.empty())
        throw ModelError("element name must be non-empty");
    InstanceNode node;
    node.kind = NodeKind::Element;
    node.name = std::move(name);
    node.value = std::move(value);
    return node;
}

InstanceNode make_node(NodeKind kind, std::string name, std::vector<InstanceNode> children,
                       std::optional<std::string> archetype_id) {
    if (kind == NodeKind::Element)
        throw ModelError("ELEMENT nodes carry a value, not children; use make_element");
    if (name.empty())
        throw ModelError("node name must be non-empty");
    if (children.empty())
        throw ModelError("non-ELEMENT node '" + name + "' must have at least one child");
    if (archetype_id)
        parse_archetype_id(*archetype_id); // throws IdSyntaxError
    InstanceNode node;
    node.kind = kind;
    node.archetype_id = std::move(archetype_id);
    node.name = std::move(name);
    node.children = std::move(children);
    return node;
}

Composition make_composition(std::string archetype_id, std::string name,
                             std::vector<InstanceNode> entries) {
    ArchetypeId id = parse_archetype_id(archetype_id);
    if (id.rm_type != NodeKind::Composition)
        throw ModelError("composition root must be a COMPOSITION archetype, got " +
                         std::string(node_kind_name(id.rm_type)));
    if (entries.empty())
        throw ModelError("composition must have at least one entry");
    return Composition{std::move(archetype_id), std::move(name), std::move(entries)};
}

namespace {

bool nodes_equal(const InstanceNode& a, const InstanceNode& b) {
    if (a.kind != b.kind || a.archetype_id != b.archetype_id || a.name != b.name)
        return false;
    if (a.value.has_value() != b.value.has_value())
        return false;
    if (a.value && !values_equal(*a.value, *b.value))
        return false;
    if (a.children.size() != b.children.size())
        return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!nodes_equal(a.children[i], b.children[i]))
            return false;
    return true;
}

} // namespace

bool compare_compositions(const Composition& a, const Composition& b) {
    if (a.archetype_id != b.archetype_id || a.name != b.name)
        return false;
    if (a.entries.size() != b.entries.size())
        return false;
    for (size_t i = 0; i < a.entries.size(); ++i)
        if (!nodes_equal(a.entries[i], b.entries[i]))
            return false;
    return true;
}

} // namespace susehr
