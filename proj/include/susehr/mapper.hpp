#pragma once

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "susehr/composition.hpp"
#include "susehr/manifest.hpp"
#include "susehr/source_reader.hpp"
#include "susehr/terminology.hpp"
#include "susehr/validate.hpp"

namespace susehr {

// Why a record could not be mapped: every failed binding, plus any
// constraint violations of the assembled composition. All-or-nothing per
// record; no partial composition is ever emitted.
struct RecordError {
    struct Item {
        std::string path;   // "<archetype id>/<element name>"
        std::string raw;    // offending source value
        std::string reason;
    };
    size_t line_number = 0;
    std::vector<Item> failures;
};

using MapOutcome = std::variant<Composition, RecordError>;

MapOutcome map_record(const SourceRecord& record, const MappingManifest& manifest,
                      const Registry& registry, const Terminology& terminology);

// Per-reason error tally plus stream totals.
struct ErrorSummary {
    std::map<std::string, size_t> by_reason;
    size_t failed_records = 0;
    size_t total_records = 0;

    std::string to_text() const; // "reason: count" per line, sorted by reason
};

// Order-preserving stream mapping. Compositions are handed to `sink` in
// input order; per-record errors (including reader-level field-count/span
// errors) are folded into the summary. With threads > 1 records are mapped
// on a worker pool in bounded chunks; the output sequence is identical for
// every worker count.
ErrorSummary map_stream(RecordReader& reader, const MappingManifest& manifest,
                        const Registry& registry, const Terminology& terminology,
                        const std::function<void(Composition&&)>& sink,
                        const std::function<void(const RecordError&)>& on_error = {},
                        unsigned threads = 1);

} // namespace susehr
