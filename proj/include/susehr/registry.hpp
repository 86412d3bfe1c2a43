#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "susehr/schema.hpp"

namespace susehr {

struct OriginCounts {
    int new_count = 0;
    int specialized = 0;
    int ckm = 0;

    bool operator==(const OriginCounts&) const = default;
};

// Reference tallies of the shipped registry, used by strict loading and by
// the registry-check command.
struct RegistryTallies {
    int archetypes = 22;
    OriginCounts origins{8, 5, 9};
    size_t attributes = 62;
};

// One (archetype, element) row of the attribute dictionary.
struct AttributeEntry {
    const ArchetypeDefinition* archetype;
    const ElementConstraint* element;
};

class Registry {
public:
    const ArchetypeDefinition* find_archetype(const std::string& rendered_id) const;
    const TemplateDefinition* find_template(const std::string& template_id) const;

    const std::vector<ArchetypeDefinition>& archetypes() const { return archetypes_; }
    const std::vector<ArchetypeStub>& stubs() const { return stubs_; }
    const std::vector<TemplateDefinition>& templates() const { return templates_; }

    // Union of all element constraints over non-COMPOSITION archetypes,
    // in load order. Stubs contribute nothing.
    std::vector<AttributeEntry> attribute_dictionary() const;

    OriginCounts origin_histogram() const;
    std::map<ValueKind, int> type_histogram() const; // all 8 kinds, zero-filled

    // Loader hooks.
    void add(ArchetypeDefinition def);
    void add(ArchetypeStub stub);
    void add(TemplateDefinition def);
    bool id_known(const ArchetypeId& id) const; // archetype or stub

private:
    std::vector<ArchetypeDefinition> archetypes_;
    std::vector<ArchetypeStub> stubs_;
    std::vector<TemplateDefinition> templates_;
    std::map<std::string, size_t> by_id_;
    std::map<std::string, size_t> templates_by_id_;
    std::map<std::string, size_t> stubs_by_id_;
};

struct LoadOptions {
    // With strict_refs, dangling parents/slots throw; otherwise they are
    // collected into LoadResult::problems (registry-check uses this so it
    // can always print the tally report).
    bool strict_refs = true;
    // With strict_tallies, deviation from the shipped reference tallies
    // throws TallyError.
    bool strict_tallies = false;
};

struct LoadResult {
    Registry registry;
    std::vector<std::string> problems;
};

// Reads every *.schema file in `dir` (sorted by filename). Throws
// DuplicateIdError, DanglingParentError, TallyError, and the schema
// parser's errors, per LoadOptions.
LoadResult load_registry(const std::filesystem::path& dir, const LoadOptions& options = {});

// Rows of registry/attributes.tsv (the per-attribute assignment manifest).
struct AttributeRow {
    std::string archetype_id;
    std::string element_name;
    std::string value_kind;
    std::string category;
    std::string units;       // "-" in the file means none
    std::string code_system; // likewise
    std::string occurrence;
};

std::vector<AttributeRow> load_attribute_manifest(const std::filesystem::path& file);

} // namespace susehr
