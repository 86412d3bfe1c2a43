// susehr — registry checks, claim-record transformation, synthetic dataset
// generation, and composition validation for the SUS claim archetype set.
// Exit codes: 0 success, 1 validation/mapping failures, 2 usage/IO errors.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "susehr/errors.hpp"
#include "susehr/generator.hpp"
#include "susehr/mapper.hpp"
#include "susehr/parallel.hpp"
#include "susehr/registry.hpp"
#include "susehr/serialize.hpp"
#include "susehr/source_reader.hpp"
#include "susehr/terminology.hpp"
#include "susehr/validate.hpp"

namespace {

using namespace susehr;

struct GlobalOptions {
    std::string registry_dir = "registry";
    std::string codes_dir; // default: sibling "codes" of the registry dir
    std::string format = "text";
    unsigned threads = 1;

    std::filesystem::path codes_path() const {
        if (!codes_dir.empty())
            return codes_dir;
        return std::filesystem::path(registry_dir).parent_path() / "codes";
    }
};

Terminology load_terminology(const GlobalOptions& opts) {
    Terminology t = Terminology::with_builtin_patterns();
    t.load_code_lists(opts.codes_path());
    return t;
}

std::string read_file_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- registry-check ----------------------------------------------------

int cmd_registry_check(const GlobalOptions& opts) {
    LoadOptions load_opts;
    load_opts.strict_refs = false; // report tallies even over a broken registry
    LoadResult loaded = load_registry(opts.registry_dir, load_opts);
    const Registry& registry = loaded.registry;

    OriginCounts origins = registry.origin_histogram();
    auto histogram = registry.type_histogram();
    size_t attributes = registry.attribute_dictionary().size();

    if (opts.format == "json") {
        std::ostringstream out;
        out << "{\"archetypes\":" << registry.archetypes().size() << ",\"new\":" << origins.new_count
            << ",\"specialized\":" << origins.specialized << ",\"ckm\":" << origins.ckm
            << ",\"attributes\":" << attributes << ",\"types\":{";
        bool first = true;
        for (const auto& [kind, count] : histogram) {
            out << (first ? "" : ",") << '"' << value_kind_rm_name(kind) << "\":" << count;
            first = false;
        }
        out << "},\"templates\":" << registry.templates().size() << "}";
        std::cout << out.str() << "\n";
    } else {
        std::cout << "archetypes=" << registry.archetypes().size() << " new=" << origins.new_count
                  << " specialized=" << origins.specialized << " ckm=" << origins.ckm
                  << " attributes=" << attributes << "\n";
        for (const auto& [kind, count] : histogram)
            std::cout << value_kind_rm_name(kind) << "=" << count << " ";
        std::cout << "\n";
        std::cout << "templates=" << registry.templates().size();
        for (const auto& t : registry.templates())
            std::cout << " " << t.id;
        std::cout << "\n";
    }

    for (const auto& problem : loaded.problems)
        std::cerr << "problem: " << problem << "\n";

    RegistryTallies expected;
    auto mismatch = [](const std::string& what, long long got, long long want) {
        std::cerr << "tally mismatch: " << what << "=" << got << " (expected " << want << ")\n";
        return 1;
    };
    if (registry.archetypes().size() != static_cast<size_t>(expected.archetypes))
        return mismatch("archetypes", registry.archetypes().size(), expected.archetypes);
    if (origins.new_count != expected.origins.new_count)
        return mismatch("new", origins.new_count, expected.origins.new_count);
    if (origins.specialized != expected.origins.specialized)
        return mismatch("specialized", origins.specialized, expected.origins.specialized);
    if (origins.ckm != expected.origins.ckm)
        return mismatch("ckm", origins.ckm, expected.origins.ckm);
    if (attributes != expected.attributes)
        return mismatch("attributes", attributes, expected.attributes);
    static const std::map<ValueKind, int> expected_types = {
        {ValueKind::Quantity, 6}, {ValueKind::Boolean, 7},  {ValueKind::CodedText, 23},
        {ValueKind::Count, 7},    {ValueKind::Date, 7},     {ValueKind::DateTime, 3},
        {ValueKind::Proportion, 2}, {ValueKind::Text, 7},
    };
    for (const auto& [kind, want] : expected_types)
        if (histogram[kind] != want)
            return mismatch(value_kind_rm_name(kind), histogram[kind], want);
    if (registry.templates().size() != 3)
        return mismatch("templates", registry.templates().size(), 3);
    if (!loaded.problems.empty())
        return 1;
    return 0;
}

// --- transform -----------------------------------------------------------

int cmd_transform(const GlobalOptions& opts, const std::string& input_path,
                  const std::string& manifest_path, const std::string& out_path,
                  long long tolerate) {
    Registry registry = load_registry(opts.registry_dir).registry;
    Terminology terminology = load_terminology(opts);
    MappingManifest manifest =
        parse_manifest(read_file_text(manifest_path), registry,
                       std::filesystem::path(manifest_path).filename().string());

    std::ifstream in(input_path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + input_path + "'");
    std::ofstream out_file;
    std::ostream* out = &std::cout;
    if (!out_path.empty() && out_path != "-") {
        out_file.open(out_path, std::ios::binary);
        if (!out_file)
            throw Error("cannot open '" + out_path + "' for writing");
        out = &out_file;
    }

    RecordReader reader(in, manifest);
    ErrorSummary summary =
        map_stream(reader, manifest, registry, terminology,
                   [&](Composition&& c) { write_composition_line(*out, c); },
                   {}, opts.threads);

    if (opts.format == "json") {
        std::ostringstream js;
        js << "{\"records\":" << summary.total_records << ",\"failed\":" << summary.failed_records
           << ",\"reasons\":{";
        bool first = true;
        for (const auto& [reason, count] : summary.by_reason) {
            js << (first ? "" : ",") << '"' << reason << "\":" << count;
            first = false;
        }
        js << "}}";
        std::cerr << js.str() << "\n";
    } else {
        std::cerr << "records=" << summary.total_records << " mapped="
                  << (summary.total_records - summary.failed_records)
                  << " failed=" << summary.failed_records << "\n";
        std::cerr << summary.to_text();
    }
    return summary.failed_records <= static_cast<size_t>(std::max<long long>(tolerate, 0)) ? 0 : 1;
}

// --- generate ------------------------------------------------------------

struct GeneratedLines {
    std::string doc;
    std::string src;
};

int cmd_generate(const GlobalOptions& opts, GenSpec spec, const std::string& out_path,
                 const std::string& source_path, std::string manifest_path, bool run_benchmark) {
    Registry registry = load_registry(opts.registry_dir).registry;
    Terminology terminology = load_terminology(opts);

    if (run_benchmark) {
        ThroughputReport report = benchmark(spec, registry, terminology);
        std::cout << (opts.format == "json" ? report.to_json() : report.to_text()) << "\n";
        return 0;
    }

    bool want_source = !source_path.empty();
    bool want_docs = !want_source || !out_path.empty();
    spec.output = want_source ? (want_docs ? GenOutput::Both : GenOutput::SourceRecords)
                              : GenOutput::Compositions;

    Generator generator(spec, registry, terminology);

    std::optional<MappingManifest> manifest;
    std::optional<SourceEmitter> emitter;
    if (want_source) {
        if (manifest_path.empty())
            manifest_path = (std::filesystem::path(opts.registry_dir).parent_path() / "manifests" /
                             (spec.template_id + ".map"))
                                .string();
        manifest = parse_manifest(read_file_text(manifest_path), registry,
                                  std::filesystem::path(manifest_path).filename().string());
        if (manifest->template_id != spec.template_id)
            throw Error("manifest is for template '" + manifest->template_id + "'");
        emitter.emplace(*manifest);
    }

    std::ofstream docs_file;
    std::ostream* docs = nullptr;
    if (want_docs) {
        if (out_path.empty() || out_path == "-") {
            docs = &std::cout;
        } else {
            docs_file.open(out_path, std::ios::binary);
            if (!docs_file)
                throw Error("cannot open '" + out_path + "' for writing");
            docs = &docs_file;
        }
    }
    std::ofstream source_file;
    if (want_source) {
        source_file.open(source_path, std::ios::binary);
        if (!source_file)
            throw Error("cannot open '" + source_path + "' for writing");
    }

    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    uint64_t bytes = 0;
    uint64_t next_index = 0;
    ordered_parallel_map<uint64_t, GeneratedLines>(
        opts.threads,
        [&]() -> std::optional<uint64_t> {
            if (next_index >= spec.count)
                return std::nullopt;
            return next_index++;
        },
        [&](uint64_t&& index) {
            Composition c = generator.generate_one(index);
            GeneratedLines lines;
            if (want_docs)
                lines.doc = serialize_composition(c);
            if (emitter)
                lines.src = emitter->render_line(c);
            return lines;
        },
        [&](GeneratedLines&& lines) {
            if (docs) {
                *docs << lines.doc << '\n';
                bytes += lines.doc.size() + 1;
            }
            if (source_file.is_open())
                source_file << lines.src << '\n';
        });
    double seconds = std::chrono::duration<double>(clock::now() - t0).count();

    std::cerr << "generated " << spec.count << " compositions in " << seconds << "s ("
              << static_cast<double>(spec.count) / std::max(seconds, 1e-9) << "/s, " << bytes
              << " bytes, peak_rss_kb=" << peak_rss_kb() << ")\n";
    return 0;
}

// --- validate --------------------------------------------------------------

int cmd_validate(const GlobalOptions& opts, const std::string& input_path,
                 const std::string& template_id) {
    Registry registry = load_registry(opts.registry_dir).registry;
    Terminology terminology = load_terminology(opts);
    if (!registry.find_template(template_id))
        throw UnknownTemplateError("unknown template '" + template_id + "'");

    std::ifstream in(input_path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + input_path + "'");

    size_t documents = 0;
    size_t invalid = 0;
    std::string line;
    std::ostringstream json_violations;
    bool first_violation = true;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        ++documents;
        try {
            Composition c = parse_composition(line);
            ValidationReport report = validate_composition(c, template_id, registry, terminology);
            if (!report.ok()) {
                ++invalid;
                for (const auto& v : report.violations) {
                    if (opts.format == "json") {
                        json_violations << (first_violation ? "" : ",") << "{\"doc\":" << documents
                                        << ",\"path\":\"" << v.path << "\",\"constraint\":\""
                                        << v.constraint << "\"}";
                        first_violation = false;
                    } else {
                        std::cout << "doc#" << documents << " " << v.path << ": " << v.constraint
                                  << ": " << v.detail << "\n";
                    }
                }
            }
        } catch (const Error& e) {
            ++invalid;
            if (opts.format == "json") {
                json_violations << (first_violation ? "" : ",") << "{\"doc\":" << documents
                                << ",\"path\":\"$\",\"constraint\":\"parse\"}";
                first_violation = false;
            } else {
                std::cout << "doc#" << documents << " parse failure: " << e.what() << "\n";
            }
        }
    }

    if (opts.format == "json") {
        std::cout << "{\"documents\":" << documents << ",\"invalid\":" << invalid
                  << ",\"violations\":[" << json_violations.str() << "]}\n";
    } else {
        std::cout << documents << " documents, " << invalid << " invalid\n";
    }
    return invalid == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"openEHR archetype registry, claim-record mapper and synthetic dataset "
                 "generator for Brazilian SUS claims data"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand

    GlobalOptions opts;
    app.add_option("--registry", opts.registry_dir, "schema directory")
        ->envname("SUSEHR_REGISTRY");
    app.add_option("--codes", opts.codes_dir, "code-list directory (default: <registry>/../codes)")
        ->envname("SUSEHR_CODES");
    app.add_option("--format", opts.format, "report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--threads", opts.threads, "worker threads")->check(CLI::Range(1u, 256u));

    auto* check = app.add_subcommand("registry-check", "load the registry and verify its tallies");

    auto* transform = app.add_subcommand("transform", "map source claim records to compositions");
    std::string input_path, manifest_path, out_path;
    long long tolerate = 0;
    transform->add_option("--input", input_path, "source record file")->required();
    transform->add_option("--manifest", manifest_path, "mapping manifest")->required();
    transform->add_option("--out", out_path, "output composition file ('-' = stdout)");
    transform->add_option("--tolerate", tolerate, "accept up to N failed records");

    auto* generate = app.add_subcommand("generate", "produce a seeded synthetic dataset");
    GenSpec spec;
    std::string gen_out, gen_source, gen_manifest, date_from, date_to;
    bool run_benchmark = false;
    generate->add_option("--template", spec.template_id, "template id")->required();
    generate->add_option("--count", spec.count, "number of compositions")->required();
    generate->add_option("--seed", spec.seed, "dataset seed");
    generate->add_option("--null-rate", spec.null_rate, "optional-element omission probability")
        ->check(CLI::Range(0.0, 1.0));
    generate->add_option("--out", gen_out, "composition output file ('-' = stdout)");
    generate->add_option("--emit-source", gen_source, "also write flat source records here");
    generate->add_option("--manifest", gen_manifest,
                         "manifest for --emit-source (default: manifests/<template>.map)");
    generate->add_option("--date-from", date_from, "claim window start (YYYY-MM-DD)");
    generate->add_option("--date-to", date_to, "claim window end (YYYY-MM-DD)");
    generate->add_flag("--benchmark", run_benchmark, "measure throughput instead of writing output");

    auto* validate = app.add_subcommand("validate", "validate newline-delimited compositions");
    std::string val_input, val_template;
    validate->add_option("--input", val_input, "composition file")->required();
    validate->add_option("--template", val_template, "template id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed())
            return cmd_registry_check(opts);
        if (transform->parsed())
            return cmd_transform(opts, input_path, manifest_path, out_path, tolerate);
        if (generate->parsed()) {
            if (!date_from.empty()) {
                auto d = parse_iso_date(date_from);
                if (!d)
                    throw Error("--date-from must be YYYY-MM-DD");
                spec.window_from = *d;
            }
            if (!date_to.empty()) {
                auto d = parse_iso_date(date_to);
                if (!d)
                    throw Error("--date-to must be YYYY-MM-DD");
                spec.window_to = *d;
            }
            if (gen_out.empty() && gen_source.empty() && !run_benchmark)
                gen_out = "-";
            return cmd_generate(opts, spec, gen_out, gen_source, gen_manifest, run_benchmark);
        }
        if (validate->parsed())
            return cmd_validate(opts, val_input, val_template);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
