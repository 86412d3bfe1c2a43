#include "susehr/registry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "susehr/errors.hpp"

namespace susehr {

const ArchetypeDefinition* Registry::find_archetype(const std::string& rendered_id) const {
    auto it = by_id_.find(rendered_id);
    return it == by_id_.end() ? nullptr : &archetypes_[it->second];
}

const TemplateDefinition* Registry::find_template(const std::string& template_id) const {
    auto it = templates_by_id_.find(template_id);
    return it == templates_by_id_.end() ? nullptr : &templates_[it->second];
}

void Registry::add(ArchetypeDefinition def) {
    std::string key = def.id.render();
    if (by_id_.count(key) || stubs_by_id_.count(key))
        throw DuplicateIdError("archetype '" + key + "' defined twice");
    by_id_.emplace(std::move(key), archetypes_.size());
    archetypes_.push_back(std::move(def));
}

void Registry::add(ArchetypeStub stub) {
    std::string key = stub.id.render();
    if (by_id_.count(key) || stubs_by_id_.count(key))
        throw DuplicateIdError("archetype '" + key + "' defined twice");
    stubs_by_id_.emplace(std::move(key), stubs_.size());
    stubs_.push_back(std::move(stub));
}

void Registry::add(TemplateDefinition def) {
    if (templates_by_id_.count(def.id))
        throw DuplicateIdError("template '" + def.id + "' defined twice");
    templates_by_id_.emplace(def.id, templates_.size());
    templates_.push_back(std::move(def));
}

bool Registry::id_known(const ArchetypeId& id) const {
    std::string key = id.render();
    return by_id_.count(key) || stubs_by_id_.count(key);
}

std::vector<AttributeEntry> Registry::attribute_dictionary() const {
    std::vector<AttributeEntry> dict;
    for (const auto& a : archetypes_) {
        if (a.id.rm_type == NodeKind::Composition)
            continue;
        for (const auto& e : a.elements)
            dict.push_back({&a, &e});
    }
    return dict;
}

OriginCounts Registry::origin_histogram() const {
    OriginCounts counts;
    for (const auto& a : archetypes_) {
        switch (a.origin) {
        case Origin::New: ++counts.new_count; break;
        case Origin::Specialized: ++counts.specialized; break;
        case Origin::Ckm: ++counts.ckm; break;
        }
    }
    return counts;
}

std::map<ValueKind, int> Registry::type_histogram() const {
    std::map<ValueKind, int> hist;
    for (int k = 0; k < 8; ++k)
        hist[static_cast<ValueKind>(k)] = 0;
    for (const auto& entry : attribute_dictionary())
        ++hist[entry.element->value_kind];
    return hist;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open file", path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Specialization invariant: the parent's concept chain must be this id's
// chain with the last segment dropped.
bool parent_chain_matches(const ArchetypeDefinition& def) {
    if (def.id.specializations.empty())
        return false;
    ArchetypeId expected = def.id.parent();
    return def.parent->rm_type == expected.rm_type &&
           def.parent->concept_chain() == expected.concept_chain();
}

} // namespace

LoadResult load_registry(const std::filesystem::path& dir, const LoadOptions& options) {
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::exists(dir))
        throw FormatError("schema directory does not exist", dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".schema")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    LoadResult result;
    Registry& registry = result.registry;
    for (const auto& path : files) {
        SchemaFile parsed = parse_schema_file(read_file(path), path.filename().string());
        for (auto& a : parsed.archetypes)
            registry.add(std::move(a));
        for (auto& s : parsed.stubs)
            registry.add(std::move(s));
        for (auto& t : parsed.templates)
            registry.add(std::move(t));
    }

    auto problem = [&](const std::string& message, bool dangling_parent) {
        if (!options.strict_refs) {
            result.problems.push_back(message);
            return;
        }
        if (dangling_parent)
            throw DanglingParentError(message);
        throw SchemaSemanticError(message);
    };

    for (const auto& a : registry.archetypes()) {
        if (a.origin != Origin::Specialized)
            continue;
        if (!a.parent) {
            problem("archetype " + a.id.render() + " is specialized but has no parent", false);
            continue;
        }
        if (!parent_chain_matches(a)) {
            problem("archetype " + a.id.render() + " parent " + a.parent->render() +
                        " is not its chain with the last segment dropped",
                    false);
            continue;
        }
        if (!registry.id_known(*a.parent))
            problem("archetype " + a.id.render() + " parent " + a.parent->render() +
                        " is not defined and has no stub",
                    true);
    }
    for (const auto& t : registry.templates()) {
        if (!registry.find_archetype(t.root.render()))
            problem("template '" + t.id + "' root " + t.root.render() + " is not defined", false);
        for (const auto& slot : t.slots)
            if (!registry.find_archetype(slot.archetype.render()))
                problem("template '" + t.id + "' slot " + slot.archetype.render() +
                            " is not defined",
                        false);
    }

    if (options.strict_tallies) {
        RegistryTallies expected;
        auto fail = [&](const std::string& what, long long got, long long want) {
            throw TallyError(what + "=" + std::to_string(got) + " (expected " +
                             std::to_string(want) + ")");
        };
        if (static_cast<int>(registry.archetypes().size()) != expected.archetypes)
            fail("archetypes", static_cast<long long>(registry.archetypes().size()),
                 expected.archetypes);
        OriginCounts origins = registry.origin_histogram();
        if (origins.new_count != expected.origins.new_count)
            fail("new", origins.new_count, expected.origins.new_count);
        if (origins.specialized != expected.origins.specialized)
            fail("specialized", origins.specialized, expected.origins.specialized);
        if (origins.ckm != expected.origins.ckm)
            fail("ckm", origins.ckm, expected.origins.ckm);
        if (registry.attribute_dictionary().size() != expected.attributes)
            fail("attributes", static_cast<long long>(registry.attribute_dictionary().size()),
                 static_cast<long long>(expected.attributes));
    }
    return result;
}

std::vector<AttributeRow> load_attribute_manifest(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw FormatError("cannot open attribute manifest", file.string());
    std::vector<AttributeRow> rows;
    std::string line;
    size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cols;
        size_t start = 0;
        while (true) {
            auto tab = line.find('\t', start);
            cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos
                                                                       : tab - start));
            if (tab == std::string::npos)
                break;
            start = tab + 1;
        }
        if (cols.size() != 7)
            throw FormatError("expected 7 tab-separated columns, got " +
                                  std::to_string(cols.size()),
                              file.filename().string() + ":" + std::to_string(line_number));
        rows.push_back({cols[0], cols[1], cols[2], cols[3], cols[4], cols[5], cols[6]});
    }
    return rows;
}

} // namespace susehr
