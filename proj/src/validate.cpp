#include "susehr/validate.hpp"

#include <set>
#include <sstream>

#include "susehr/errors.hpp"

namespace susehr {

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    for (const auto& v : violations)
        out << v.path << ": " << v.constraint << ": " << v.detail << " [" << v.archetype << "]\n";
    return out.str();
}

namespace {

class Validator {
public:
    Validator(const Registry& registry, const Terminology& terminology, ValidationReport& report)
        : registry_(registry), terminology_(terminology), report_(report) {}

    void run(const Composition& c, const TemplateDefinition& templ) {
        if (c.archetype_id != templ.root.render())
            add(c.archetype_id, "root-archetype", templ.root.render(),
                "expected template root " + templ.root.render());

        std::set<std::string> seen;
        for (const auto& entry : c.entries)
            check_entry(entry, templ, seen);

        for (const auto& slot : templ.slots) {
            if (slot.occurrence == Occurrence::Required && !seen.count(slot.archetype.render()))
                add(slot.archetype.render(), "required-slot", slot.archetype.render(),
                    "required entry is missing");
        }
    }

private:
    void add(std::string path, std::string constraint, std::string archetype, std::string detail) {
        report_.violations.push_back(
            {std::move(path), std::move(constraint), std::move(archetype), std::move(detail)});
    }

    void check_entry(const InstanceNode& entry, const TemplateDefinition& templ,
                     std::set<std::string>& seen) {
        if (!entry.archetype_id) {
            add(entry.name, "slot-membership", templ.root.render(),
                "entry without an archetype id");
            return;
        }
        const std::string& id = *entry.archetype_id;

        bool in_template = false;
        for (const auto& slot : templ.slots)
            if (slot.archetype.render() == id)
                in_template = true;
        if (!in_template) {
            add(id, "slot-membership", id, "archetype is not a slot of template '" + templ.id + "'");
            return;
        }
        if (!seen.insert(id).second)
            add(id, "slot-membership", id, "duplicate entry for slot");

        const ArchetypeDefinition* def = registry_.find_archetype(id);
        if (!def) {
            add(id, "slot-membership", id, "archetype is not in the registry");
            return;
        }
        if (entry.kind != def->id.rm_type)
            add(id, "node-kind", id,
                std::string("entry kind ") + node_kind_name(entry.kind) + " does not match " +
                    node_kind_name(def->id.rm_type));

        std::set<std::string> present;
        for (const auto& child : entry.children)
            check_element(child, *def, present);

        for (const auto& constraint : def->elements)
            if (constraint.occurrence == Occurrence::Required && !present.count(constraint.name))
                add(id + "/" + constraint.name, "required-element", id,
                    "required element is missing");
    }

    void check_element(const InstanceNode& node, const ArchetypeDefinition& def,
                       std::set<std::string>& present) {
        std::string path = def.id.render() + "/" + node.name;
        if (node.kind != NodeKind::Element) {
            add(path, "element-existence", def.id.render(),
                "archetype entries contain leaf elements only");
            return;
        }
        const ElementConstraint* constraint = def.find_element(node.name);
        if (!constraint) {
            add(path, "element-existence", def.id.render(),
                "element is not declared by the archetype");
            return;
        }
        if (!present.insert(node.name).second)
            add(path, "element-existence", def.id.render(), "element appears twice");
        if (!node.value) {
            add(path, "value-kind", def.id.render(), "element carries no value");
            return;
        }

        const DataValue& value = *node.value;
        if (kind_of(value) != constraint->value_kind) {
            add(path, "value-kind", def.id.render(),
                std::string("expected ") + value_kind_name(constraint->value_kind) + ", got " +
                    value_kind_name(kind_of(value)));
            return;
        }

        switch (constraint->value_kind) {
        case ValueKind::Quantity: {
            const auto& q = std::get<DvQuantity>(value);
            if (constraint->units && q.units != *constraint->units)
                add(path, "units", def.id.render(),
                    "expected units '" + *constraint->units + "', got '" + q.units + "'");
            if (constraint->range && !constraint->range->contains(q.magnitude))
                add(path, "range", def.id.render(),
                    "magnitude " + q.magnitude.text() + " outside [" +
                        constraint->range->min.text() + ", " + constraint->range->max.text() + "]");
            break;
        }
        case ValueKind::Count: {
            const auto& c = std::get<DvCount>(value);
            if (constraint->range) {
                Decimal m = Decimal::from_scaled(c.magnitude, 0);
                if (!constraint->range->contains(m))
                    add(path, "range", def.id.render(),
                        "magnitude " + m.text() + " outside [" + constraint->range->min.text() +
                            ", " + constraint->range->max.text() + "]");
            }
            break;
        }
        case ValueKind::CodedText: {
            const auto& ct = std::get<DvCodedText>(value);
            if (constraint->code_system) {
                if (ct.terminology_id != *constraint->code_system) {
                    add(path, "code", def.id.render(),
                        "expected terminology '" + *constraint->code_system + "', got '" +
                            ct.terminology_id + "'");
                    break;
                }
                if (!terminology_.has_system(*constraint->code_system)) {
                    add(path, "code", def.id.render(),
                        "code system '" + *constraint->code_system + "' is not loaded");
                    break;
                }
                CodeLookupResult lookup = terminology_.validate_code(*constraint->code_system, ct.code);
                if (!lookup.valid)
                    add(path, "code", def.id.render(),
                        "code '" + ct.code + "': " + lookup.reason.value_or("invalid"));
            }
            break;
        }
        case ValueKind::Proportion: {
            const auto& p = std::get<DvProportion>(value);
            if (constraint->proportion_kind && p.kind != *constraint->proportion_kind)
                add(path, "proportion-kind", def.id.render(),
                    std::string("expected ") + proportion_kind_name(*constraint->proportion_kind) +
                        ", got " + proportion_kind_name(p.kind));
            break;
        }
        default:
            break;
        }
    }

    const Registry& registry_;
    const Terminology& terminology_;
    ValidationReport& report_;
};

} // namespace

ValidationReport validate_composition(const Composition& c, const std::string& template_id,
                                      const Registry& registry, const Terminology& terminology) {
    const TemplateDefinition* templ = registry.find_template(template_id);
    if (!templ)
        throw UnknownTemplateError("unknown template '" + template_id + "'");
    ValidationReport report;
    Validator(registry, terminology, report).run(c, *templ);
    return report;
}

} // namespace susehr
