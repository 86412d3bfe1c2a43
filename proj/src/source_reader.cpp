#include "susehr/source_reader.hpp"

#include <istream>

#include "susehr/errors.hpp"

namespace susehr {
namespace {

bool is_valid_utf8(std::string_view s) {
    size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        size_t extra;
        if (c < 0x80) extra = 0;
        else if ((c & 0xE0) == 0xC0) extra = 1;
        else if ((c & 0xF0) == 0xE0) extra = 2;
        else if ((c & 0xF8) == 0xF0) extra = 3;
        else return false;
        if (i + extra >= s.size())
            return false; // truncated sequence
        for (size_t k = 1; k <= extra; ++k)
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80)
                return false;
        i += extra + 1;
    }
    return true;
}

std::string latin1_to_utf8(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back(static_cast<char>(0xC0 | (c >> 6)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

} // namespace

RecordReader::RecordReader(std::istream& in, const MappingManifest& manifest)
    : in_(in), manifest_(manifest) {}

std::optional<RecordItem> RecordReader::next() {
    std::string line;
    if (!std::getline(in_, line))
        return std::nullopt;
    ++line_number_;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();

    if (manifest_.encoding == SourceEncoding::Latin1) {
        line = latin1_to_utf8(line);
    } else if (!is_valid_utf8(line)) {
        throw EncodingError("line " + std::to_string(line_number_) +
                            " is not valid UTF-8 (declare 'encoding: latin-1'?)");
    }

    RecordItem item;
    item.line_number = line_number_;

    if (manifest_.format == SourceFormat::Delimited) {
        std::vector<std::string> fields;
        size_t start = 0;
        while (true) {
            auto sep = line.find(manifest_.separator, start);
            fields.push_back(line.substr(start, sep == std::string::npos ? std::string::npos
                                                                         : sep - start));
            if (sep == std::string::npos)
                break;
            start = sep + 1;
        }
        if (manifest_.expected_fields > 0 && fields.size() != manifest_.expected_fields) {
            item.error_kind = "field-count";
            item.error_detail = "expected " + std::to_string(manifest_.expected_fields) +
                                " fields, got " + std::to_string(fields.size());
            return item;
        }
        item.record = SourceRecord{line_number_, std::move(fields)};
        return item;
    }

    // fixed-width
    if (line.size() < manifest_.expected_fields) {
        item.error_kind = "span";
        item.error_detail = "line is " + std::to_string(line.size()) +
                            " characters, spans need " + std::to_string(manifest_.expected_fields);
        return item;
    }
    std::vector<std::string> fields;
    fields.reserve(manifest_.spans.size());
    for (const auto& span : manifest_.spans)
        fields.push_back(line.substr(span.offset, span.length));
    item.record = SourceRecord{line_number_, std::move(fields)};
    return item;
}

} // namespace susehr
