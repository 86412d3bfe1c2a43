#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "susehr/registry.hpp"

namespace susehr {

enum class SourceFormat { Delimited, FixedWidth };
enum class SourceEncoding { Utf8, Latin1 };

enum class TransformKind { Identity, Date, Code, DecimalScale, Boolean };

struct Transform {
    TransformKind kind = TransformKind::Identity;
    std::string format;      // date
    std::string system;      // code
    int scale = 0;           // decimal
    std::string true_token;  // boolean
    std::string false_token;
};

// One column-to-element binding. Targets are resolved against the registry
// when the manifest is parsed, so mapping never fails late on a missing
// element.
struct Binding {
    std::string source_column; // as written: a column name or "$N" (1-based)
    size_t column_index = 0;   // resolved
    std::string archetype_id;  // rendered target archetype id
    std::string element;
    Transform transform;
};

// 0-based column span of a fixed-width field.
struct FixedSpan {
    size_t offset = 0;
    size_t length = 0;
};

struct MappingManifest {
    std::string template_id;
    SourceFormat format = SourceFormat::Delimited;
    char separator = ';';
    SourceEncoding encoding = SourceEncoding::Utf8;
    std::vector<std::string> columns;
    std::vector<FixedSpan> spans; // parallel to columns (fixed-width only)
    std::vector<Binding> bindings;
    size_t expected_fields = 0;
};

// Grammar in docs/manifest-format.md. Throws ManifestSyntaxError
// (position-reported), UnknownTargetError (template/archetype/element not
// resolvable, archetype not a slot of the template, duplicate target), or
// TransformKindError (transform output cannot feed the target's value kind).
MappingManifest parse_manifest(std::string_view text, const Registry& registry,
                               const std::string& filename = "<manifest>");

} // namespace susehr
