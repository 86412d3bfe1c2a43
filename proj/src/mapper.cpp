#include "susehr/mapper.hpp"

#include <algorithm>
#include <sstream>

#include "susehr/calendar.hpp"
#include "susehr/errors.hpp"
#include "susehr/parallel.hpp"

namespace susehr {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

// Bindings resolved against the registry, grouped into template slot order
// so the assembled entries match the generator's ordering.
struct Plan {
    const TemplateDefinition* templ = nullptr;

    struct Field {
        const Binding* binding = nullptr;
        const ElementConstraint* element = nullptr;
    };
    struct Entry {
        const ArchetypeDefinition* archetype = nullptr;
        std::vector<Field> fields; // in archetype element order
    };
    std::vector<Entry> entries; // in template slot order
};

Plan make_plan(const MappingManifest& manifest, const Registry& registry) {
    Plan plan;
    plan.templ = registry.find_template(manifest.template_id);
    if (!plan.templ)
        throw UnknownTemplateError("unknown template '" + manifest.template_id + "'");

    for (const auto& slot : plan.templ->slots) {
        std::string slot_id = slot.archetype.render();
        const ArchetypeDefinition* def = registry.find_archetype(slot_id);
        if (!def)
            throw UnknownTargetError("slot archetype '" + slot_id + "' is not in the registry");
        Plan::Entry entry;
        entry.archetype = def;
        for (const auto& element : def->elements) {
            for (const auto& binding : manifest.bindings) {
                if (binding.archetype_id == slot_id && binding.element == element.name) {
                    entry.fields.push_back({&binding, &element});
                    break;
                }
            }
        }
        if (!entry.fields.empty())
            plan.entries.push_back(std::move(entry));
    }
    return plan;
}

struct TransformResult {
    std::optional<DataValue> value;
    std::string reason; // set on failure
};

TransformResult fail(std::string reason) {
    return {std::nullopt, std::move(reason)};
}

bool parse_integer(std::string_view s, long long& out) {
    if (s.empty())
        return false;
    size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size())
        return false;
    long long value = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
            return false;
        value = value * 10 + (s[i] - '0');
    }
    out = s[0] == '-' ? -value : value;
    return true;
}

TransformResult apply_transform(std::string_view raw, const Binding& binding,
                                const ElementConstraint& element,
                                const Terminology& terminology) {
    const Transform& t = binding.transform;
    try {
        switch (t.kind) {
        case TransformKind::Identity:
            switch (element.value_kind) {
            case ValueKind::Text:
                return {make_text(std::string(raw)), {}};
            case ValueKind::Count: {
                long long value = 0;
                if (!parse_integer(raw, value))
                    return fail("not an integer");
                return {make_count(value), {}};
            }
            case ValueKind::Date:
                if (!parse_iso_date(raw))
                    return fail("not an ISO-8601 date");
                return {make_date(std::string(raw)), {}};
            case ValueKind::DateTime:
                if (!parse_iso_date_time(raw))
                    return fail("not an ISO-8601 date-time");
                return {make_date_time(std::string(raw)), {}};
            case ValueKind::Quantity: {
                if (!element.units)
                    return fail("element declares no units");
                if (!Decimal::parse(raw))
                    return fail("not a decimal number");
                return {make_quantity(raw, *element.units, element.precision), {}};
            }
            default:
                return fail("identity transform cannot reach this element kind");
            }
        case TransformKind::Date: {
            auto dt = parse_with_format(raw, t.format);
            if (!dt)
                return fail("does not match date format '" + t.format + "'");
            if (element.value_kind == ValueKind::Date)
                return {make_date(render_iso_date(dt->date)), {}};
            return {make_date_time(render_iso_date_time(*dt)), {}};
        }
        case TransformKind::Code: {
            CodeLookupResult lookup = terminology.validate_code(t.system, raw);
            if (!lookup.valid)
                return fail(lookup.reason.value_or("invalid code"));
            std::string display = lookup.display.value_or(std::string(raw));
            return {make_coded_text(std::move(display), t.system, std::string(raw)), {}};
        }
        case TransformKind::DecimalScale: {
            long long scaled = 0;
            if (!parse_integer(raw, scaled))
                return fail("not a scaled integer");
            Decimal value = Decimal::from_scaled(scaled, t.scale);
            if (element.value_kind == ValueKind::Quantity) {
                if (!element.units)
                    return fail("element declares no units");
                return {make_quantity(value.text(), *element.units, element.precision), {}};
            }
            return {make_proportion(value.text(), "100", ProportionKind::Percent), {}};
        }
        case TransformKind::Boolean:
            if (raw == t.true_token)
                return {make_boolean(true), {}};
            if (raw == t.false_token)
                return {make_boolean(false), {}};
            return fail("expected '" + t.true_token + "' or '" + t.false_token + "'");
        }
    } catch (const Error& e) {
        return fail(e.what());
    }
    return fail("unhandled transform");
}

MapOutcome map_with_plan(const SourceRecord& record, const Plan& plan,
                         const Registry& registry, const Terminology& terminology) {
    RecordError error;
    error.line_number = record.line_number;
    std::vector<InstanceNode> entries;

    for (const auto& planned : plan.entries) {
        // An entry whose bound columns are all empty is simply absent; the
        // required-element rule applies only within a present entry.
        bool any_present = false;
        for (const auto& field : planned.fields) {
            size_t index = field.binding->column_index;
            if (index < record.fields.size() && !trim(record.fields[index]).empty())
                any_present = true;
        }
        if (!any_present)
            continue;

        std::vector<InstanceNode> children;
        for (const auto& field : planned.fields) {
            const Binding& binding = *field.binding;
            std::string path = binding.archetype_id + "/" + binding.element;
            if (binding.column_index >= record.fields.size()) {
                error.failures.push_back({path, "", "column out of range"});
                continue;
            }
            std::string raw(trim(record.fields[binding.column_index]));
            if (raw.empty()) {
                if (field.element->occurrence == Occurrence::Required)
                    error.failures.push_back({path, "", "required element empty"});
                continue;
            }
            TransformResult result = apply_transform(raw, binding, *field.element, terminology);
            if (!result.value) {
                error.failures.push_back({path, raw, result.reason});
                continue;
            }
            children.push_back(make_element(binding.element, std::move(*result.value)));
        }
        if (!children.empty()) {
            entries.push_back(make_node(planned.archetype->id.rm_type,
                                        planned.archetype->id.concept_chain(), std::move(children),
                                        planned.archetype->id.render()));
        }
    }

    if (!error.failures.empty())
        return error;
    if (entries.empty()) {
        error.failures.push_back({plan.templ->root.render(), "", "record maps to no elements"});
        return error;
    }

    Composition c = make_composition(plan.templ->root.render(), plan.templ->id, std::move(entries));
    ValidationReport report = validate_composition(c, plan.templ->id, registry, terminology);
    if (!report.ok()) {
        for (const auto& v : report.violations)
            error.failures.push_back({v.path, "", v.constraint + ": " + v.detail});
        return error;
    }
    return c;
}

} // namespace

MapOutcome map_record(const SourceRecord& record, const MappingManifest& manifest,
                      const Registry& registry, const Terminology& terminology) {
    Plan plan = make_plan(manifest, registry);
    return map_with_plan(record, plan, registry, terminology);
}

std::string ErrorSummary::to_text() const {
    std::ostringstream out;
    for (const auto& [reason, count] : by_reason)
        out << reason << ": " << count << '\n';
    return out.str();
}

ErrorSummary map_stream(RecordReader& reader, const MappingManifest& manifest,
                        const Registry& registry, const Terminology& terminology,
                        const std::function<void(Composition&&)>& sink,
                        const std::function<void(const RecordError&)>& on_error,
                        unsigned threads) {
    Plan plan = make_plan(manifest, registry);
    ErrorSummary summary;

    auto record_failure = [&](const RecordError& err) {
        ++summary.failed_records;
        for (const auto& item : err.failures)
            ++summary.by_reason[item.reason];
        if (on_error)
            on_error(err);
    };

    ordered_parallel_map<RecordItem, MapOutcome>(
        threads,
        [&]() { return reader.next(); },
        [&](RecordItem&& item) -> MapOutcome {
            if (!item.ok()) {
                RecordError err;
                err.line_number = item.line_number;
                err.failures.push_back({"<record>", "", item.error_kind + ": " + item.error_detail});
                return err;
            }
            return map_with_plan(*item.record, plan, registry, terminology);
        },
        [&](MapOutcome&& outcome) {
            ++summary.total_records;
            if (std::holds_alternative<Composition>(outcome))
                sink(std::move(std::get<Composition>(outcome)));
            else
                record_failure(std::get<RecordError>(outcome));
        });

    return summary;
}

} // namespace susehr
