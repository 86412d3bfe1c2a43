#include "susehr/generator.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "susehr/errors.hpp"
#include "susehr/rng.hpp"
#include "susehr/serialize.hpp"

namespace susehr {
namespace {

// Text pools for the free-text claim fields; element names not listed here
// fall back to a generic pool.
const std::map<std::string, std::vector<std::string>, std::less<>>& text_pools() {
    static const std::map<std::string, std::vector<std::string>, std::less<>> pools = {
        {"schema", {"AC-T", "FOLFOX-6", "CHOP-21", "FLOX", "CMF-28"}},
        {"irradiated area", {"pelvis", "thorax", "head and neck", "abdomen", "breast"}},
        {"abdominal ultrasonography", {"normal", "abnormal", "not performed"}},
        {"histopathological grading", {"G1", "G2", "G3", "G4", "GX"}},
        {"regional linphonodes", {"N0", "N1", "N2", "N3", "NX"}},
        {"Baros score", {"failure", "fair", "good", "very good", "excellent"}},
        {"Baros table", {"standard table", "updated table"}},
    };
    return pools;
}

const std::vector<std::string>& generic_text_pool() {
    static const std::vector<std::string> pool = {"record note 1", "record note 2",
                                                  "record note 3", "record note 4"};
    return pool;
}

char draw_digit(SplitMix64& rng) {
    return static_cast<char>('0' + rng.below(10));
}

std::string draw_pattern_code(PatternRule rule, SplitMix64& rng) {
    std::string code;
    switch (rule) {
    case PatternRule::Icd10:
        code.push_back(static_cast<char>('A' + rng.below(26)));
        code.push_back(draw_digit(rng));
        code.push_back(draw_digit(rng));
        if (rng.below(2)) {
            code.push_back('.');
            code.push_back(draw_digit(rng));
        }
        return code;
    case PatternRule::Sigtap:
        for (int i = 0; i < 10; ++i)
            code.push_back(draw_digit(rng));
        return code;
    case PatternRule::Cnes:
        for (int i = 0; i < 7; ++i)
            code.push_back(draw_digit(rng));
        return code;
    }
    return code;
}

long long scaled_bound(const Decimal& d, int precision, const ElementConstraint& element) {
    auto text = d.scaled_text(precision);
    if (!text)
        throw Error("range bound " + d.text() + " of element '" + element.name +
                    "' has more decimals than its precision");
    return std::stoll(*text);
}

} // namespace

// Cross-element consistency inside one composition: discharge follows the
// admission date, body mass index is computed from weight and height.
struct Generator::DrawContext {
    std::optional<Decimal> weight;     // kg
    std::optional<Decimal> height;     // cm
    std::optional<CivilDate> admit_date;
};

Generator::Generator(GenSpec spec, const Registry& registry, const Terminology& terminology)
    : spec_(std::move(spec)), registry_(registry), terminology_(terminology) {
    templ_ = registry_.find_template(spec_.template_id);
    if (!templ_) {
        std::string available;
        for (const auto& t : registry_.templates())
            available += (available.empty() ? "" : ", ") + t.id;
        throw UnknownTemplateError("unknown template '" + spec_.template_id +
                                   "' (available: " + available + ")");
    }
    if (spec_.count < 1)
        throw Error("count must be >= 1");
    if (!(spec_.null_rate >= 0.0 && spec_.null_rate <= 1.0))
        throw Error("null_rate must be within [0, 1]");
    if (!is_valid_date(spec_.window_from) || !is_valid_date(spec_.window_to))
        throw Error("invalid date window");
    window_from_days_ = days_from_civil(spec_.window_from);
    window_to_days_ = days_from_civil(spec_.window_to);
    if (window_from_days_ > window_to_days_)
        throw Error("date window is empty");

    for (const auto& slot : templ_->slots) {
        const ArchetypeDefinition* def = registry_.find_archetype(slot.archetype.render());
        if (!def)
            throw UnknownTemplateError("template '" + templ_->id + "' slot " +
                                       slot.archetype.render() + " is not in the registry");
        slot_defs_.push_back(def);
    }
    null_ppm_ = static_cast<uint64_t>(std::llround(spec_.null_rate * 1000000.0));
}

Composition Generator::generate_one(uint64_t index) const {
    SplitMix64 rng = SplitMix64::for_record(spec_.seed, index);
    DrawContext ctx;
    std::vector<InstanceNode> entries;

    for (size_t s = 0; s < templ_->slots.size(); ++s) {
        const TemplateSlot& slot = templ_->slots[s];
        const ArchetypeDefinition& def = *slot_defs_[s];

        bool include = true;
        if (slot.occurrence == Occurrence::Optional)
            include = !rng.chance_ppm(null_ppm_);
        // Body mass index is derived, never drawn; it appears only when
        // weight and height are both present.
        bool is_bmi = def.id.concept_chain() == "body_mass_index";
        if (is_bmi && (!ctx.weight || !ctx.height))
            include = false;
        if (!include)
            continue;

        std::vector<InstanceNode> children;
        for (const auto& element : def.elements) {
            bool present = element.occurrence == Occurrence::Required || !rng.chance_ppm(null_ppm_);
            if (!present)
                continue;
            children.push_back(make_element(element.name, draw_value(element, rng, ctx)));
        }
        if (children.empty())
            continue;
        entries.push_back(
            make_node(def.id.rm_type, def.id.concept_chain(), std::move(children), def.id.render()));
    }

    return make_composition(templ_->root.render(), templ_->id, std::move(entries));
}

void Generator::run(const std::function<void(Composition&&, uint64_t)>& sink) const {
    for (uint64_t i = 0; i < spec_.count; ++i)
        sink(generate_one(i), i);
}

DataValue Generator::draw_value(const ElementConstraint& element, SplitMix64& rng,
                                DrawContext& ctx) const {
    switch (element.value_kind) {
    case ValueKind::Quantity: {
        int precision = element.precision.value_or(0);
        long long lo = 0;
        long long hi = 100;
        if (element.range) {
            lo = scaled_bound(element.range->min, precision, element);
            hi = scaled_bound(element.range->max, precision, element);
        } else {
            for (int i = 0; i < precision; ++i) {
                lo *= 10;
                hi *= 10;
            }
        }
        Decimal magnitude;
        if (element.name == "body mass index" && ctx.weight && ctx.height) {
            // weight / (height/100)^2, rounded to one decimal; kept
            // consistent with the drawn weight and height by construction.
            long long w10 = std::stoll(*ctx.weight->scaled_text(1));
            long long h_cm = std::stoll(*ctx.height->scaled_text(0));
            long long bmi10 = (w10 * 10000 + h_cm * h_cm / 2) / (h_cm * h_cm);
            magnitude = Decimal::from_scaled(bmi10, 1);
        } else {
            magnitude = Decimal::from_scaled(rng.between(lo, hi), precision);
        }
        if (element.name == "weight")
            ctx.weight = magnitude;
        else if (element.name == "height")
            ctx.height = magnitude;
        return make_quantity(magnitude.text(), element.units.value_or("1"), element.precision);
    }
    case ValueKind::Count: {
        long long lo = 0;
        long long hi = 100;
        if (element.range) {
            lo = scaled_bound(element.range->min, 0, element);
            hi = scaled_bound(element.range->max, 0, element);
        }
        return make_count(rng.between(lo, hi));
    }
    case ValueKind::Boolean:
        return make_boolean(rng.below(2) == 1);
    case ValueKind::Text: {
        const auto& pools = text_pools();
        auto it = pools.find(element.name);
        const std::vector<std::string>& pool = it == pools.end() ? generic_text_pool() : it->second;
        return make_text(pool[rng.below(pool.size())]);
    }
    case ValueKind::CodedText: {
        if (!element.code_system)
            throw Error("element '" + element.name + "' declares no code_system; cannot draw");
        const CodeSystem* system = terminology_.find(*element.code_system);
        if (!system)
            throw Error("code system '" + *element.code_system + "' is not loaded");
        if (system->enumerated) {
            const std::string& code = system->codes[rng.below(system->codes.size())];
            return make_coded_text(system->entries.at(code), system->id, code);
        }
        std::string code = draw_pattern_code(*system->rule, rng);
        return make_coded_text(code, system->id, code);
    }
    case ValueKind::Date: {
        long day = 0;
        if (element.name == "birth date") {
            long birth_from = days_from_civil(CivilDate{1920, 1, 1});
            long birth_to = window_from_days_ - 1;
            day = rng.between(birth_from, std::max(birth_from, birth_to));
        } else if (element.name == "date of discharge" && ctx.admit_date) {
            day = days_from_civil(*ctx.admit_date) + rng.between(0, 60);
        } else {
            day = rng.between(window_from_days_, window_to_days_);
        }
        return make_date(render_iso_date(civil_from_days(day)));
    }
    case ValueKind::DateTime: {
        long to = window_to_days_;
        if (element.name == "admit date/time") {
            // leave room for the discharge offset so it stays in-window
            to = std::max(window_from_days_, window_to_days_ - 60);
        }
        CivilDateTime dt;
        dt.date = civil_from_days(rng.between(window_from_days_, to));
        dt.time = CivilTime{static_cast<int>(rng.below(24)), static_cast<int>(rng.below(60)), 0};
        if (element.name == "admit date/time")
            ctx.admit_date = dt.date;
        return make_date_time(render_iso_date_time(dt));
    }
    case ValueKind::Proportion: {
        Decimal numerator = Decimal::from_scaled(rng.between(0, 1000), 1); // 0.0 .. 100.0
        ProportionKind kind = element.proportion_kind.value_or(ProportionKind::Percent);
        if (kind == ProportionKind::Percent)
            return make_proportion(numerator.text(), "100", kind);
        return make_proportion(numerator.text(), "1", kind);
    }
    }
    throw Error("unhandled value kind");
}

SourceEmitter::SourceEmitter(const MappingManifest& manifest) : manifest_(manifest) {
    by_column_.assign(manifest_.columns.empty() ? manifest_.expected_fields
                                                : manifest_.columns.size(),
                      nullptr);
    for (const auto& binding : manifest_.bindings)
        if (binding.column_index < by_column_.size())
            by_column_[binding.column_index] = &binding;
}

namespace {

const InstanceNode* find_element_node(const Composition& c, const std::string& archetype_id,
                                      const std::string& element) {
    for (const auto& entry : c.entries) {
        if (!entry.archetype_id || *entry.archetype_id != archetype_id)
            continue;
        for (const auto& child : entry.children)
            if (child.name == element)
                return &child;
    }
    return nullptr;
}

std::string render_field(const DataValue& value, const Transform& t) {
    switch (t.kind) {
    case TransformKind::Identity:
        switch (kind_of(value)) {
        case ValueKind::Text: return std::get<DvText>(value).value;
        case ValueKind::Count: return std::to_string(std::get<DvCount>(value).magnitude);
        case ValueKind::Date: return std::get<DvDate>(value).value;
        case ValueKind::DateTime: return std::get<DvDateTime>(value).value;
        case ValueKind::Quantity: return std::get<DvQuantity>(value).magnitude.text();
        default: throw Error("identity cannot render this value kind");
        }
    case TransformKind::Date: {
        CivilDateTime dt;
        if (kind_of(value) == ValueKind::Date) {
            dt.date = *parse_iso_date(std::get<DvDate>(value).value);
        } else {
            dt = *parse_iso_date_time(std::get<DvDateTime>(value).value);
        }
        auto rendered = render_with_format(dt, t.format);
        if (!rendered)
            throw Error("date value does not fit format '" + t.format + "'");
        return *rendered;
    }
    case TransformKind::Code:
        return std::get<DvCodedText>(value).code;
    case TransformKind::DecimalScale: {
        const Decimal& d = kind_of(value) == ValueKind::Quantity
                               ? std::get<DvQuantity>(value).magnitude
                               : std::get<DvProportion>(value).numerator;
        auto scaled = d.scaled_text(t.scale);
        if (!scaled)
            throw Error("value " + d.text() + " has more decimals than scale " +
                        std::to_string(t.scale));
        return *scaled;
    }
    case TransformKind::Boolean:
        return std::get<DvBoolean>(value).value ? t.true_token : t.false_token;
    }
    throw Error("unhandled transform");
}

} // namespace

std::string SourceEmitter::render_line(const Composition& c) const {
    std::vector<std::string> fields(by_column_.size());
    for (size_t i = 0; i < by_column_.size(); ++i) {
        const Binding* binding = by_column_[i];
        if (!binding)
            continue;
        const InstanceNode* node = find_element_node(c, binding->archetype_id, binding->element);
        if (!node)
            continue;
        fields[i] = render_field(*node->value, binding->transform);
    }

    if (manifest_.format == SourceFormat::Delimited) {
        std::string line;
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i)
                line.push_back(manifest_.separator);
            if (fields[i].find(manifest_.separator) != std::string::npos ||
                fields[i].find('\n') != std::string::npos)
                throw Error("field value contains the separator: '" + fields[i] + "'");
            line += fields[i];
        }
        return line;
    }

    std::string line(manifest_.expected_fields, ' ');
    for (size_t i = 0; i < fields.size(); ++i) {
        const FixedSpan& span = manifest_.spans[i];
        if (fields[i].size() > span.length)
            throw Error("field value '" + fields[i] + "' exceeds its span");
        line.replace(span.offset, fields[i].size(), fields[i]);
    }
    return line;
}

std::string ThroughputReport::to_json() const {
    std::ostringstream out;
    out << "{\"count\":" << count << ",\"generate_seconds\":" << generate_seconds
        << ",\"generate_rate\":" << generate_rate
        << ",\"generate_serialize_seconds\":" << generate_serialize_seconds
        << ",\"generate_serialize_rate\":" << generate_serialize_rate
        << ",\"serialized_bytes\":" << serialized_bytes << ",\"peak_rss_kb\":" << peak_rss_kb
        << "}";
    return out.str();
}

std::string ThroughputReport::to_text() const {
    std::ostringstream out;
    out << "count=" << count << " generate=" << generate_rate
        << "/s generate+serialize=" << generate_serialize_rate
        << "/s bytes=" << serialized_bytes << " peak_rss_kb=" << peak_rss_kb;
    return out.str();
}

long peak_rss_kb() {
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    return usage.ru_maxrss;
}

ThroughputReport benchmark(const GenSpec& spec, const Registry& registry,
                           const Terminology& terminology) {
    using clock = std::chrono::steady_clock;
    Generator generator(spec, registry, terminology);
    ThroughputReport report;
    report.count = spec.count;

    auto t0 = clock::now();
    generator.run([](Composition&&, uint64_t) {});
    auto t1 = clock::now();
    report.generate_seconds = std::chrono::duration<double>(t1 - t0).count();

    uint64_t bytes = 0;
    auto t2 = clock::now();
    generator.run([&](Composition&& c, uint64_t) { bytes += serialize_composition(c).size() + 1; });
    auto t3 = clock::now();
    report.generate_serialize_seconds = std::chrono::duration<double>(t3 - t2).count();
    report.serialized_bytes = bytes;

    const double floor_s = 1e-9;
    report.generate_rate = static_cast<double>(spec.count) / std::max(report.generate_seconds, floor_s);
    report.generate_serialize_rate =
        static_cast<double>(spec.count) / std::max(report.generate_serialize_seconds, floor_s);
    report.peak_rss_kb = peak_rss_kb();
    return report;
}

} // namespace susehr
