#include "susehr/serialize.hpp"

#include <ostream>

#include <json.hpp>

#include "susehr/errors.hpp"

namespace susehr {
namespace {

using json = nlohmann::json; // object keys are kept sorted, which is what
                             // gives the canonical rendering its stable key order

json value_to_json(const DataValue& v) {
    json j;
    switch (kind_of(v)) {
    case ValueKind::Quantity: {
        const auto& q = std::get<DvQuantity>(v);
        j["type"] = "quantity";
        j["magnitude"] = q.magnitude.text();
        j["units"] = q.units;
        if (q.precision)
            j["precision"] = *q.precision;
        break;
    }
    case ValueKind::Count:
        j["type"] = "count";
        j["magnitude"] = std::get<DvCount>(v).magnitude;
        break;
    case ValueKind::Boolean:
        j["type"] = "boolean";
        j["value"] = std::get<DvBoolean>(v).value;
        break;
    case ValueKind::Text:
        j["type"] = "text";
        j["value"] = std::get<DvText>(v).value;
        break;
    case ValueKind::CodedText: {
        const auto& c = std::get<DvCodedText>(v);
        j["type"] = "coded_text";
        j["value"] = c.value;
        j["terminology"] = c.terminology_id;
        j["code"] = c.code;
        break;
    }
    case ValueKind::Date:
        j["type"] = "date";
        j["value"] = std::get<DvDate>(v).value;
        break;
    case ValueKind::DateTime:
        j["type"] = "date_time";
        j["value"] = std::get<DvDateTime>(v).value;
        break;
    case ValueKind::Proportion: {
        const auto& p = std::get<DvProportion>(v);
        j["type"] = "proportion";
        j["numerator"] = p.numerator.text();
        j["denominator"] = p.denominator.text();
        j["kind"] = proportion_kind_name(p.kind);
        break;
    }
    }
    return j;
}

json node_to_json(const InstanceNode& n) {
    json j;
    j["kind"] = node_kind_name(n.kind);
    j["name"] = n.name;
    if (n.archetype_id)
        j["archetype_id"] = *n.archetype_id;
    if (n.kind == NodeKind::Element) {
        j["value"] = value_to_json(*n.value);
    } else {
        json children = json::array();
        for (const auto& c : n.children)
            children.push_back(node_to_json(c));
        j["children"] = std::move(children);
    }
    return j;
}

// --- decoding ---------------------------------------------------------

[[noreturn]] void fail_model(const std::string& message) {
    throw ModelError(message);
}

const json& require(const json& j, const char* key, const char* context) {
    auto it = j.find(key);
    if (it == j.end())
        fail_model(std::string(context) + " is missing key '" + key + "'");
    return *it;
}

std::string require_string(const json& j, const char* key, const char* context) {
    const json& v = require(j, key, context);
    if (!v.is_string())
        fail_model(std::string(context) + " key '" + key + "' must be a string");
    return v.get<std::string>();
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const char* context) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k)
                known = true;
        if (!known)
            fail_model(std::string(context) + " has unknown key '" + it.key() + "'");
    }
}

DataValue json_to_value(const json& j) {
    if (!j.is_object())
        fail_model("data value must be an object");
    std::string type = require_string(j, "type", "data value");

    if (type == "quantity") {
        reject_unknown_keys(j, {"type", "magnitude", "units", "precision"}, "quantity");
        std::optional<int> precision;
        if (auto it = j.find("precision"); it != j.end()) {
            if (!it->is_number_integer())
                fail_model("quantity precision must be an integer");
            precision = it->get<int>();
        }
        return make_quantity(require_string(j, "magnitude", "quantity"),
                             require_string(j, "units", "quantity"), precision);
    }
    if (type == "count") {
        reject_unknown_keys(j, {"type", "magnitude"}, "count");
        const json& m = require(j, "magnitude", "count");
        if (!m.is_number_integer())
            fail_model("count magnitude must be an integer");
        return make_count(m.get<long long>());
    }
    if (type == "boolean") {
        reject_unknown_keys(j, {"type", "value"}, "boolean");
        const json& v = require(j, "value", "boolean");
        if (!v.is_boolean())
            fail_model("boolean value must be true or false");
        return make_boolean(v.get<bool>());
    }
    if (type == "text") {
        reject_unknown_keys(j, {"type", "value"}, "text");
        return make_text(require_string(j, "value", "text"));
    }
    if (type == "coded_text") {
        reject_unknown_keys(j, {"type", "value", "terminology", "code"}, "coded_text");
        return make_coded_text(require_string(j, "value", "coded_text"),
                               require_string(j, "terminology", "coded_text"),
                               require_string(j, "code", "coded_text"));
    }
    if (type == "date") {
        reject_unknown_keys(j, {"type", "value"}, "date");
        return make_date(require_string(j, "value", "date"));
    }
    if (type == "date_time") {
        reject_unknown_keys(j, {"type", "value"}, "date_time");
        return make_date_time(require_string(j, "value", "date_time"));
    }
    if (type == "proportion") {
        reject_unknown_keys(j, {"type", "numerator", "denominator", "kind"}, "proportion");
        auto kind = proportion_kind_from_name(require_string(j, "kind", "proportion"));
        if (!kind)
            fail_model("unknown proportion kind");
        return make_proportion(require_string(j, "numerator", "proportion"),
                               require_string(j, "denominator", "proportion"), *kind);
    }
    fail_model("unknown data value type '" + type + "'");
}

InstanceNode json_to_node(const json& j) {
    if (!j.is_object())
        fail_model("instance node must be an object");
    reject_unknown_keys(j, {"kind", "name", "archetype_id", "value", "children"}, "instance node");

    std::string kind_name = require_string(j, "kind", "instance node");
    auto kind = node_kind_from_name(kind_name);
    if (!kind)
        fail_model("unknown node kind '" + kind_name + "'");
    std::string name = require_string(j, "name", "instance node");

    std::optional<std::string> archetype_id;
    if (j.contains("archetype_id"))
        archetype_id = require_string(j, "archetype_id", "instance node");

    if (*kind == NodeKind::Element) {
        if (j.contains("children"))
            fail_model("ELEMENT node '" + name + "' must not have children");
        InstanceNode node = make_element(std::move(name), json_to_value(require(j, "value", "element")));
        node.archetype_id = std::move(archetype_id);
        return node;
    }

    if (j.contains("value"))
        fail_model(std::string(node_kind_name(*kind)) + " node '" + name + "' must not carry a value");
    const json& children_json = require(j, "children", "instance node");
    if (!children_json.is_array())
        fail_model("children must be an array");
    std::vector<InstanceNode> children;
    children.reserve(children_json.size());
    for (const auto& c : children_json)
        children.push_back(json_to_node(c));
    try {
        return make_node(*kind, std::move(name), std::move(children), std::move(archetype_id));
    } catch (const IdSyntaxError& e) {
        fail_model(e.what());
    }
}

// Line/column of a byte offset, for syntax error positions.
std::pair<size_t, size_t> line_column(std::string_view text, size_t byte) {
    size_t line = 1;
    size_t column = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

} // namespace

std::string serialize_composition(const Composition& c) {
    json j;
    j["archetype_id"] = c.archetype_id;
    j["name"] = c.name;
    json entries = json::array();
    for (const auto& e : c.entries)
        entries.push_back(node_to_json(e));
    j["entries"] = std::move(entries);
    return j.dump();
}

Composition parse_composition(std::string_view document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::parse_error& e) {
        auto [line, column] = line_column(document, e.byte > 0 ? e.byte - 1 : 0);
        throw SyntaxError(e.what(),
                          "line " + std::to_string(line) + ", column " + std::to_string(column));
    }
    if (!j.is_object())
        throw ModelError("composition document must be a JSON object");
    reject_unknown_keys(j, {"archetype_id", "name", "entries"}, "composition");

    std::string archetype_id = require_string(j, "archetype_id", "composition");
    std::string name = require_string(j, "name", "composition");
    const json& entries_json = require(j, "entries", "composition");
    if (!entries_json.is_array())
        throw ModelError("composition entries must be an array");

    std::vector<InstanceNode> entries;
    entries.reserve(entries_json.size());
    for (const auto& e : entries_json)
        entries.push_back(json_to_node(e));
    try {
        return make_composition(std::move(archetype_id), std::move(name), std::move(entries));
    } catch (const IdSyntaxError& e) {
        throw ModelError(e.what());
    }
}

void write_composition_line(std::ostream& out, const Composition& c) {
    out << serialize_composition(c) << '\n';
}

} // namespace susehr
