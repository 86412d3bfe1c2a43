#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "susehr/manifest.hpp"

namespace susehr {

struct SourceRecord {
    size_t line_number = 1;
    std::vector<std::string> fields; // aligned with the manifest's columns
};

// One step of the record stream: either a record or a per-record error
// ("field-count" / "span"). Errors never abort the stream.
struct RecordItem {
    size_t line_number = 0;
    std::optional<SourceRecord> record;
    std::string error_kind;   // empty on success
    std::string error_detail;

    bool ok() const { return record.has_value(); }
};

// Streams records off an input; memory use is one line regardless of
// input length. Throws EncodingError when a line is not valid in the
// manifest's declared encoding (latin-1 input is transcoded to UTF-8).
class RecordReader {
public:
    RecordReader(std::istream& in, const MappingManifest& manifest);

    std::optional<RecordItem> next(); // nullopt at end of stream

private:
    std::istream& in_;
    const MappingManifest& manifest_;
    size_t line_number_ = 0;
};

} // namespace susehr
