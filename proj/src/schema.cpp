#include "susehr/schema.hpp"

#include <array>

#include "susehr/errors.hpp"

namespace susehr {
namespace {

constexpr std::array<const char*, 3> kOriginNames = {"new", "specialized", "ckm"};
constexpr std::array<const char*, 7> kCategoryNames = {
    "procedures", "diagnosis", "laboratory", "physical",
    "administrative-hcp", "administrative-hospitalization", "demographic"};

} // namespace

const char* origin_name(Origin o) {
    return kOriginNames[static_cast<size_t>(o)];
}

std::optional<Origin> origin_from_name(std::string_view name) {
    for (size_t i = 0; i < kOriginNames.size(); ++i)
        if (name == kOriginNames[i])
            return static_cast<Origin>(i);
    return std::nullopt;
}

const char* category_name(Category c) {
    return kCategoryNames[static_cast<size_t>(c)];
}

std::optional<Category> category_from_name(std::string_view name) {
    for (size_t i = 0; i < kCategoryNames.size(); ++i)
        if (name == kCategoryNames[i])
            return static_cast<Category>(i);
    return std::nullopt;
}

const ElementConstraint* ArchetypeDefinition::find_element(std::string_view name) const {
    for (const auto& e : elements)
        if (e.name == name)
            return &e;
    return nullptr;
}

namespace {

// Line-oriented reader. A schema document is a sequence of `key: value`
// lines; `elements:`/`slots:` introduce item lists whose items start with
// a two-space-indented "- " and continue with four-space-indented keys.
struct LineCursor {
    std::string_view text;
    std::string filename;
    size_t pos = 0;
    size_t line_number = 0;

    std::optional<std::string_view> next_line() {
        if (pos >= text.size())
            return std::nullopt;
        auto nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_number;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        return line;
    }

    std::string where() const { return filename + ":" + std::to_string(line_number); }
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

bool blank_or_comment(std::string_view line) {
    auto t = trim(line);
    return t.empty() || t.front() == '#';
}

// Splits "key: value"; returns false when there is no ':'.
bool split_key_value(std::string_view line, std::string& key, std::string& value) {
    auto colon = line.find(':');
    if (colon == std::string_view::npos)
        return false;
    key = std::string(trim(line.substr(0, colon)));
    value = std::string(trim(line.substr(colon + 1)));
    return !key.empty();
}

size_t indent_of(std::string_view line) {
    size_t n = 0;
    while (n < line.size() && line[n] == ' ')
        ++n;
    return n;
}

ArchetypeId parse_id_or_throw(const std::string& text, const LineCursor& cur) {
    try {
        return parse_archetype_id(text);
    } catch (const IdSyntaxError& e) {
        throw SchemaSyntaxError(e.what(), cur.where());
    }
}

struct ElementKeys {
    std::optional<std::string> kind, units, code_system, range, precision, proportion_kind,
        occurrence, category;
};

ElementConstraint finish_element(std::string name, const ElementKeys& keys, const LineCursor& cur,
                                 const ArchetypeId& owner) {
    ElementConstraint e;
    e.name = std::move(name);
    if (e.name.empty())
        throw SchemaSyntaxError("element name must be non-empty", cur.where());
    if (!keys.kind)
        throw SchemaSyntaxError("element '" + e.name + "' is missing 'kind'", cur.where());
    auto kind = value_kind_from_name(*keys.kind);
    if (!kind)
        throw SchemaSyntaxError("unknown value kind '" + *keys.kind + "'", cur.where());
    e.value_kind = *kind;

    if (!keys.category)
        throw SchemaSyntaxError("element '" + e.name + "' is missing 'category'", cur.where());
    auto cat = category_from_name(*keys.category);
    if (!cat)
        throw SchemaSyntaxError("unknown category '" + *keys.category + "'", cur.where());
    e.category = *cat;

    if (keys.occurrence) {
        if (*keys.occurrence == "required")
            e.occurrence = Occurrence::Required;
        else if (*keys.occurrence == "optional")
            e.occurrence = Occurrence::Optional;
        else
            throw SchemaSyntaxError("occurrence must be 'required' or 'optional'", cur.where());
    }

    auto semantic = [&](const std::string& msg) {
        throw SchemaSemanticError(owner.render() + ", element '" + e.name + "': " + msg,
                                  cur.where());
    };

    if (keys.units) {
        if (e.value_kind != ValueKind::Quantity)
            semantic("'units' is only valid on quantity elements");
        if (keys.units->empty())
            semantic("'units' must be non-empty");
        e.units = *keys.units;
    }
    if (keys.code_system) {
        if (e.value_kind != ValueKind::CodedText)
            semantic("'code_system' is only valid on coded_text elements");
        e.code_system = *keys.code_system;
    }
    if (keys.range) {
        if (e.value_kind != ValueKind::Quantity && e.value_kind != ValueKind::Count)
            semantic("'range' is only valid on quantity or count elements");
        auto sep = keys.range->find("..");
        if (sep == std::string::npos)
            throw SchemaSyntaxError("range must be '<min>..<max>'", cur.where());
        auto min = Decimal::parse(trim(std::string_view(*keys.range).substr(0, sep)));
        auto max = Decimal::parse(trim(std::string_view(*keys.range).substr(sep + 2)));
        if (!min || !max)
            throw SchemaSyntaxError("range bounds must be decimal numbers", cur.where());
        if (min->compare(*max) > 0)
            semantic("range min exceeds max");
        e.range = ValueRange{*min, *max};
    }
    if (keys.precision) {
        if (e.value_kind != ValueKind::Quantity)
            semantic("'precision' is only valid on quantity elements");
        try {
            e.precision = std::stoi(*keys.precision);
        } catch (const std::exception&) {
            throw SchemaSyntaxError("precision must be an integer", cur.where());
        }
        if (*e.precision < 0)
            semantic("precision must be >= 0");
    }
    if (keys.proportion_kind) {
        if (e.value_kind != ValueKind::Proportion)
            semantic("'proportion_kind' is only valid on proportion elements");
        auto pk = proportion_kind_from_name(*keys.proportion_kind);
        if (!pk)
            throw SchemaSyntaxError("unknown proportion kind '" + *keys.proportion_kind + "'",
                                    cur.where());
        e.proportion_kind = *pk;
    }
    if (e.value_kind == ValueKind::Proportion && !e.proportion_kind)
        e.proportion_kind = ProportionKind::Percent;
    return e;
}

} // namespace

SchemaFile parse_schema_file(std::string_view text, const std::string& filename) {
    SchemaFile out;
    LineCursor cur{text, filename};

    // Definition currently being assembled, if any.
    std::optional<ArchetypeDefinition> archetype;
    std::optional<TemplateDefinition> templ;
    bool in_elements = false;
    bool in_slots = false;

    // Pending element item.
    std::optional<std::string> element_name;
    ElementKeys element_keys;
    // Pending slot item.
    std::optional<std::string> slot_archetype;
    std::optional<std::string> slot_occurrence;

    auto flush_element = [&]() {
        if (!element_name)
            return;
        ElementConstraint e = finish_element(*element_name, element_keys, cur, archetype->id);
        if (archetype->find_element(e.name))
            throw SchemaSemanticError("duplicate element '" + e.name + "' in " +
                                          archetype->id.render(),
                                      cur.where());
        archetype->elements.push_back(std::move(e));
        element_name.reset();
        element_keys = {};
    };
    auto flush_slot = [&]() {
        if (!slot_archetype)
            return;
        TemplateSlot slot;
        slot.archetype = parse_id_or_throw(*slot_archetype, cur);
        if (slot_occurrence) {
            if (*slot_occurrence == "required")
                slot.occurrence = Occurrence::Required;
            else if (*slot_occurrence == "optional")
                slot.occurrence = Occurrence::Optional;
            else
                throw SchemaSyntaxError("occurrence must be 'required' or 'optional'", cur.where());
        }
        templ->slots.push_back(std::move(slot));
        slot_archetype.reset();
        slot_occurrence.reset();
    };
    auto flush_definition = [&]() {
        flush_element();
        flush_slot();
        if (archetype) {
            if (archetype->origin == Origin::Specialized && !archetype->parent)
                throw SchemaSemanticError("specialized archetype " + archetype->id.render() +
                                              " requires 'parent'",
                                          cur.where());
            out.archetypes.push_back(std::move(*archetype));
            archetype.reset();
        }
        if (templ) {
            if (templ->root.rm_type != NodeKind::Composition)
                throw SchemaSemanticError("template '" + templ->id +
                                              "' root must be a COMPOSITION archetype",
                                          cur.where());
            out.templates.push_back(std::move(*templ));
            templ.reset();
        }
        in_elements = in_slots = false;
    };

    while (auto maybe_line = cur.next_line()) {
        std::string_view line = *maybe_line;
        if (blank_or_comment(line))
            continue;

        size_t indent = indent_of(line);
        std::string key, value;
        std::string_view body = line;

        if (indent == 0) {
            if (!split_key_value(body, key, value))
                throw SchemaSyntaxError("expected 'key: value'", cur.where());

            if (key == "archetype" || key == "archetype_stub" || key == "template") {
                flush_definition();
                if (key == "archetype") {
                    archetype = ArchetypeDefinition{};
                    archetype->id = parse_id_or_throw(value, cur);
                } else if (key == "archetype_stub") {
                    out.stubs.push_back(ArchetypeStub{parse_id_or_throw(value, cur)});
                } else {
                    if (value.empty())
                        throw SchemaSyntaxError("template id must be non-empty", cur.where());
                    templ = TemplateDefinition{};
                    templ->id = value;
                }
                continue;
            }

            if (archetype) {
                flush_element();
                in_elements = false;
                if (key == "origin") {
                    auto o = origin_from_name(value);
                    if (!o)
                        throw SchemaSyntaxError("unknown origin '" + value + "'", cur.where());
                    archetype->origin = *o;
                } else if (key == "parent") {
                    archetype->parent = parse_id_or_throw(value, cur);
                } else if (key == "description") {
                    archetype->description = value;
                } else if (key == "elements") {
                    if (!value.empty())
                        throw SchemaSyntaxError("'elements:' takes no inline value", cur.where());
                    in_elements = true;
                } else {
                    throw SchemaSyntaxError("unknown key '" + key + "' in archetype definition",
                                            cur.where());
                }
                continue;
            }
            if (templ) {
                flush_slot();
                in_slots = false;
                if (key == "root") {
                    templ->root = parse_id_or_throw(value, cur);
                } else if (key == "slots") {
                    if (!value.empty())
                        throw SchemaSyntaxError("'slots:' takes no inline value", cur.where());
                    in_slots = true;
                } else {
                    throw SchemaSyntaxError("unknown key '" + key + "' in template definition",
                                            cur.where());
                }
                continue;
            }
            throw SchemaSyntaxError("'" + key + "' outside any definition", cur.where());
        }

        // Indented: list items and their keys.
        std::string_view trimmed = trim(body);
        bool item_start = trimmed.substr(0, 2) == "- ";
        if (item_start)
            trimmed.remove_prefix(2);
        if (!split_key_value(trimmed, key, value))
            throw SchemaSyntaxError("expected 'key: value'", cur.where());

        if (in_elements) {
            if (item_start) {
                flush_element();
                if (key != "name")
                    throw SchemaSyntaxError("element item must start with 'name'", cur.where());
                element_name = value;
                continue;
            }
            if (!element_name)
                throw SchemaSyntaxError("element key outside an item", cur.where());
            auto set = [&](std::optional<std::string>& slot) {
                if (slot)
                    throw SchemaSyntaxError("duplicate key '" + key + "'", cur.where());
                slot = value;
            };
            if (key == "kind") set(element_keys.kind);
            else if (key == "units") set(element_keys.units);
            else if (key == "code_system") set(element_keys.code_system);
            else if (key == "range") set(element_keys.range);
            else if (key == "precision") set(element_keys.precision);
            else if (key == "proportion_kind") set(element_keys.proportion_kind);
            else if (key == "occurrence") set(element_keys.occurrence);
            else if (key == "category") set(element_keys.category);
            else
                throw SchemaSyntaxError("unknown element key '" + key + "'", cur.where());
            continue;
        }
        if (in_slots) {
            if (item_start) {
                flush_slot();
                if (key != "archetype")
                    throw SchemaSyntaxError("slot item must start with 'archetype'", cur.where());
                slot_archetype = value;
                continue;
            }
            if (!slot_archetype)
                throw SchemaSyntaxError("slot key outside an item", cur.where());
            if (key == "occurrence") {
                if (slot_occurrence)
                    throw SchemaSyntaxError("duplicate key 'occurrence'", cur.where());
                slot_occurrence = value;
            } else {
                throw SchemaSyntaxError("unknown slot key '" + key + "'", cur.where());
            }
            continue;
        }
        throw SchemaSyntaxError("unexpected indented line", cur.where());
    }

    flush_definition();
    return out;
}

} // namespace susehr
