#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "susehr/calendar.hpp"
#include "susehr/composition.hpp"
#include "susehr/manifest.hpp"
#include "susehr/registry.hpp"
#include "susehr/rng.hpp"
#include "susehr/terminology.hpp"

namespace susehr {

enum class GenOutput { Compositions, SourceRecords, Both };

struct GenSpec {
    std::string template_id;
    uint64_t count = 1;
    uint64_t seed = 0;
    double null_rate = 0.0; // probability an optional slot/element is omitted
    GenOutput output = GenOutput::Compositions;
    CivilDate window_from{2008, 1, 1}; // claim-date draw window
    CivilDate window_to{2014, 12, 31};
};

// Seeded synthetic composition source. Every composition is valid under
// its template; content is a pure function of (seed, spec, registry and
// code lists), and composition i depends only on (seed, i), so generation
// can shard by index ranges. Draw rules in docs/generator.md.
class Generator {
public:
    // Throws UnknownTemplateError / Error on an invalid spec.
    Generator(GenSpec spec, const Registry& registry, const Terminology& terminology);

    Composition generate_one(uint64_t index) const; // thread-safe
    void run(const std::function<void(Composition&&, uint64_t)>& sink) const;

    const GenSpec& spec() const { return spec_; }

private:
    struct DrawContext;

    DataValue draw_value(const ElementConstraint& element, SplitMix64& rng,
                         DrawContext& ctx) const;

    GenSpec spec_;
    const Registry& registry_;
    const Terminology& terminology_;
    const TemplateDefinition* templ_;
    std::vector<const ArchetypeDefinition*> slot_defs_;
    uint64_t null_ppm_;
    long window_from_days_;
    long window_to_days_;
};

// Renders a composition back into one flat source line under a manifest
// (the inverse of map_record); absent elements become empty fields.
// Feeding the lines through ingestion + mapper reproduces compare-equal
// compositions, which is the pipeline's end-to-end oracle.
class SourceEmitter {
public:
    SourceEmitter(const MappingManifest& manifest);

    std::string render_line(const Composition& c) const;

private:
    const MappingManifest& manifest_;
    std::vector<const Binding*> by_column_; // parallel to manifest columns
};

struct ThroughputReport {
    uint64_t count = 0;
    double generate_seconds = 0;
    double generate_serialize_seconds = 0;
    double generate_rate = 0;           // compositions / s
    double generate_serialize_rate = 0;
    uint64_t serialized_bytes = 0;
    long peak_rss_kb = 0;

    std::string to_json() const;
    std::string to_text() const;
};

ThroughputReport benchmark(const GenSpec& spec, const Registry& registry,
                           const Terminology& terminology);

long peak_rss_kb(); // process high-water mark, for streaming checks

} // namespace susehr
