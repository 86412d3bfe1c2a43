#include "susehr/manifest.hpp"

#include <map>
#include <set>

#include "susehr/errors.hpp"

namespace susehr {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t')
            ++i;
        if (i > start)
            out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

Transform parse_transform(std::string_view text, const std::string& where) {
    auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')')
        throw ManifestSyntaxError("transform must be name(args): '" + std::string(text) + "'",
                                  where);
    std::string name(trim(text.substr(0, open)));
    std::string_view args = text.substr(open + 1, text.size() - open - 2);

    Transform t;
    if (name == "date") {
        t.kind = TransformKind::Date;
        t.format = std::string(trim(args));
        if (t.format.empty())
            throw ManifestSyntaxError("date() requires a format string", where);
    } else if (name == "code") {
        t.kind = TransformKind::Code;
        t.system = std::string(trim(args));
        if (t.system.empty())
            throw ManifestSyntaxError("code() requires a system id", where);
    } else if (name == "decimal") {
        t.kind = TransformKind::DecimalScale;
        std::string s(trim(args));
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw ManifestSyntaxError("decimal() requires a non-negative scale", where);
        t.scale = std::stoi(s);
    } else if (name == "boolean") {
        t.kind = TransformKind::Boolean;
        auto comma = args.find(',');
        if (comma == std::string_view::npos)
            throw ManifestSyntaxError("boolean() requires 'true-token,false-token'", where);
        t.true_token = std::string(trim(args.substr(0, comma)));
        t.false_token = std::string(trim(args.substr(comma + 1)));
        if (t.true_token.empty() || t.false_token.empty() || t.true_token == t.false_token)
            throw ManifestSyntaxError("boolean() tokens must be distinct and non-empty", where);
    } else {
        throw ManifestSyntaxError("unknown transform '" + name + "'", where);
    }
    return t;
}

// Transform/target compatibility, checked at parse time.
void check_transform_kind(const Transform& t, const ElementConstraint& element,
                          const std::string& where) {
    auto fail = [&](const std::string& msg) { throw TransformKindError(msg, where); };
    switch (t.kind) {
    case TransformKind::Identity:
        switch (element.value_kind) {
        case ValueKind::Text:
        case ValueKind::Count:
        case ValueKind::Date:
        case ValueKind::DateTime:
        case ValueKind::Quantity:
            break;
        default:
            fail(std::string("identity cannot produce a ") +
                 value_kind_name(element.value_kind) + " for element '" + element.name + "'");
        }
        break;
    case TransformKind::Date:
        if (element.value_kind != ValueKind::Date && element.value_kind != ValueKind::DateTime)
            fail("date() targets date or date_time elements, but '" + element.name + "' is " +
                 value_kind_name(element.value_kind));
        break;
    case TransformKind::Code:
        if (element.value_kind != ValueKind::CodedText)
            fail("code() targets coded_text elements, but '" + element.name + "' is " +
                 value_kind_name(element.value_kind));
        if (element.code_system && *element.code_system != t.system)
            fail("element '" + element.name + "' is bound to code system '" +
                 *element.code_system + "', not '" + t.system + "'");
        break;
    case TransformKind::DecimalScale:
        if (element.value_kind == ValueKind::Proportion) {
            if (element.proportion_kind && *element.proportion_kind != ProportionKind::Percent)
                fail("decimal() onto a proportion requires a percent element");
        } else if (element.value_kind != ValueKind::Quantity) {
            fail("decimal() targets quantity or percent-proportion elements, but '" +
                 element.name + "' is " + value_kind_name(element.value_kind));
        }
        break;
    case TransformKind::Boolean:
        if (element.value_kind != ValueKind::Boolean)
            fail("boolean() targets boolean elements, but '" + element.name + "' is " +
                 value_kind_name(element.value_kind));
        break;
    }
}

} // namespace

MappingManifest parse_manifest(std::string_view text, const Registry& registry,
                               const std::string& filename) {
    MappingManifest m;
    bool saw_template = false;
    bool saw_format = false;
    std::map<std::string, size_t> column_index;
    std::set<std::string> bound_targets;
    size_t line_number = 0;
    size_t pos = 0;
    size_t fixed_end = 0;

    auto where = [&]() { return filename + ":" + std::to_string(line_number); };

    while (pos <= text.size()) {
        if (pos == text.size())
            break;
        auto nl = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_number;
        if (!raw.empty() && raw.back() == '\r')
            raw.remove_suffix(1);
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;

        if (line.substr(0, 6) == "field ") {
            std::vector<std::string> parts = split_ws(line.substr(6));
            if (parts.size() != 2)
                throw ManifestSyntaxError("expected 'field NAME A..B'", where());
            auto dots = parts[1].find("..");
            if (dots == std::string::npos)
                throw ManifestSyntaxError("span must be 'A..B' (1-based, inclusive)", where());
            size_t a = 0, b = 0;
            try {
                a = std::stoul(parts[1].substr(0, dots));
                b = std::stoul(parts[1].substr(dots + 2));
            } catch (const std::exception&) {
                throw ManifestSyntaxError("span bounds must be integers", where());
            }
            if (a < 1 || b < a)
                throw ManifestSyntaxError("span must satisfy 1 <= A <= B", where());
            if (column_index.count(parts[0]))
                throw ManifestSyntaxError("duplicate field '" + parts[0] + "'", where());
            column_index[parts[0]] = m.columns.size();
            m.columns.push_back(parts[0]);
            m.spans.push_back(FixedSpan{a - 1, b - a + 1});
            fixed_end = std::max(fixed_end, b);
            continue;
        }

        if (line.substr(0, 4) == "map ") {
            std::string_view rest = line.substr(4);
            auto arrow = rest.find(" -> ");
            if (arrow == std::string_view::npos)
                throw ManifestSyntaxError("expected 'map COLUMN -> TARGET [via TRANSFORM]'",
                                          where());
            Binding b;
            b.source_column = std::string(trim(rest.substr(0, arrow)));
            std::string_view target = trim(rest.substr(arrow + 4));
            auto via = target.find(" via ");
            if (via != std::string_view::npos) {
                b.transform = parse_transform(trim(target.substr(via + 5)), where());
                target = trim(target.substr(0, via));
            }
            auto slash = target.find('/');
            if (slash == std::string_view::npos)
                throw ManifestSyntaxError("target must be '<archetype-id>/<element name>'",
                                          where());
            b.archetype_id = std::string(target.substr(0, slash));
            b.element = std::string(target.substr(slash + 1));
            if (b.source_column.empty() || b.element.empty())
                throw ManifestSyntaxError("binding column and element must be non-empty", where());
            m.bindings.push_back(std::move(b));
            continue;
        }

        auto colon = line.find(':');
        if (colon == std::string_view::npos)
            throw ManifestSyntaxError("expected 'key: value', 'field ...' or 'map ...'", where());
        std::string key(trim(line.substr(0, colon)));
        std::string value(trim(line.substr(colon + 1)));

        if (key == "template") {
            m.template_id = value;
            saw_template = true;
        } else if (key == "format") {
            if (value == "delimited")
                m.format = SourceFormat::Delimited;
            else if (value == "fixed-width")
                m.format = SourceFormat::FixedWidth;
            else
                throw ManifestSyntaxError("format must be 'delimited' or 'fixed-width'", where());
            saw_format = true;
        } else if (key == "separator") {
            if (value == "tab")
                m.separator = '\t';
            else if (value.size() == 1)
                m.separator = value[0];
            else
                throw ManifestSyntaxError("separator must be one character or 'tab'", where());
        } else if (key == "encoding") {
            if (value == "utf-8")
                m.encoding = SourceEncoding::Utf8;
            else if (value == "latin-1")
                m.encoding = SourceEncoding::Latin1;
            else
                throw ManifestSyntaxError("encoding must be 'utf-8' or 'latin-1'", where());
        } else if (key == "columns") {
            for (const auto& name : split_ws(value)) {
                if (column_index.count(name))
                    throw ManifestSyntaxError("duplicate column '" + name + "'", where());
                column_index[name] = m.columns.size();
                m.columns.push_back(name);
            }
        } else {
            throw ManifestSyntaxError("unknown key '" + key + "'", where());
        }
    }

    if (!saw_template)
        throw ManifestSyntaxError("manifest is missing 'template:'", filename);
    if (!saw_format)
        throw ManifestSyntaxError("manifest is missing 'format:'", filename);
    if (m.format == SourceFormat::FixedWidth && m.spans.empty())
        throw ManifestSyntaxError("fixed-width manifest declares no 'field' spans", filename);

    const TemplateDefinition* templ = registry.find_template(m.template_id);
    if (!templ)
        throw UnknownTargetError("template '" + m.template_id + "' is not in the registry",
                                 filename);
    std::set<std::string> slot_ids;
    for (const auto& slot : templ->slots)
        slot_ids.insert(slot.archetype.render());

    size_t max_index = 0;
    for (auto& b : m.bindings) {
        // Resolve the source column.
        if (!b.source_column.empty() && b.source_column[0] == '$') {
            std::string digits = b.source_column.substr(1);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
                throw ManifestSyntaxError("column reference must be '$N'", filename);
            size_t n = std::stoul(digits);
            if (n < 1)
                throw ManifestSyntaxError("column references are 1-based", filename);
            if (!m.columns.empty() && n > m.columns.size())
                throw ManifestSyntaxError("column $" + digits + " is beyond the declared columns",
                                          filename);
            b.column_index = n - 1;
        } else {
            auto it = column_index.find(b.source_column);
            if (it == column_index.end())
                throw ManifestSyntaxError("unknown column '" + b.source_column + "'", filename);
            b.column_index = it->second;
        }
        max_index = std::max(max_index, b.column_index + 1);

        // Resolve the target.
        if (!slot_ids.count(b.archetype_id))
            throw UnknownTargetError("archetype '" + b.archetype_id + "' is not a slot of template '" +
                                         m.template_id + "'",
                                     filename);
        const ArchetypeDefinition* def = registry.find_archetype(b.archetype_id);
        if (!def)
            throw UnknownTargetError("archetype '" + b.archetype_id + "' is not in the registry",
                                     filename);
        const ElementConstraint* element = def->find_element(b.element);
        if (!element)
            throw UnknownTargetError("element '" + b.element + "' is not declared by " +
                                         b.archetype_id,
                                     filename);
        std::string target_key = b.archetype_id + "/" + b.element;
        if (!bound_targets.insert(target_key).second)
            throw ManifestSyntaxError("target '" + target_key + "' bound twice", filename);

        check_transform_kind(b.transform, *element, filename);
    }

    m.expected_fields = m.format == SourceFormat::FixedWidth
                            ? fixed_end
                            : (m.columns.empty() ? max_index : m.columns.size());
    return m;
}

} // namespace susehr
