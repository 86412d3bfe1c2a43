#include "susehr/terminology.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "susehr/errors.hpp"

namespace susehr {
namespace {

bool all_ascii_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return c >= '0' && c <= '9'; });
}

CodeLookupResult check_pattern(PatternRule rule, std::string_view code) {
    switch (rule) {
    case PatternRule::Icd10: {
        bool ok = code.size() >= 3 && code[0] >= 'A' && code[0] <= 'Z' &&
                  all_ascii_digits(code.substr(1, 2));
        if (ok && code.size() > 3) {
            ok = code[3] == '.' && code.size() >= 5 && code.size() <= 6 &&
                 all_ascii_digits(code.substr(4));
        } else if (ok) {
            ok = code.size() == 3;
        }
        if (ok)
            return {true, std::nullopt, std::nullopt};
        return {false, std::nullopt, "expected letter + 2 digits + optional '.' + 1-2 digits"};
    }
    case PatternRule::Sigtap:
        if (code.size() == 10 && all_ascii_digits(code))
            return {true, std::nullopt, std::nullopt};
        return {false, std::nullopt, "expected 10 digits"};
    case PatternRule::Cnes:
        if (code.size() == 7 && all_ascii_digits(code))
            return {true, std::nullopt, std::nullopt};
        return {false, std::nullopt, "expected 7 digits"};
    }
    return {false, std::nullopt, "unknown pattern rule"};
}

} // namespace

Terminology Terminology::with_builtin_patterns() {
    Terminology t;
    auto add = [&](std::string id, PatternRule rule, std::string pattern) {
        CodeSystem sys;
        sys.id = id;
        sys.rule = rule;
        sys.pattern = std::move(pattern);
        t.systems_.emplace(std::move(id), std::move(sys));
    };
    add("ICD10", PatternRule::Icd10, "letter + 2 digits + optional '.' + 1-2 digits");
    add("SIGTAP", PatternRule::Sigtap, "10 digits");
    add("CNES", PatternRule::Cnes, "7 digits");
    return t;
}

void Terminology::load_code_lists(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    if (std::filesystem::exists(dir))
        for (const auto& entry : std::filesystem::directory_iterator(dir))
            if (entry.is_regular_file() && entry.path().extension() == ".tsv")
                files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    for (const auto& path : files) {
        std::string stem = path.stem().string();
        std::transform(stem.begin(), stem.end(), stem.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });

        std::ifstream in(path);
        if (!in)
            throw FormatError("cannot open code list", path.string());

        CodeSystem sys;
        sys.id = stem;
        sys.enumerated = true;

        std::string line;
        size_t line_number = 0;
        while (std::getline(in, line)) {
            ++line_number;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty() || line[0] == '#')
                continue;
            auto tab = line.find('\t');
            if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
                throw FormatError("expected code<TAB>label",
                                  path.filename().string() + ":" + std::to_string(line_number));
            std::string code = line.substr(0, tab);
            std::string label = line.substr(tab + 1);
            if (!sys.entries.emplace(code, label).second)
                throw DuplicateCodeError("duplicate code '" + code + "'",
                                         path.filename().string() + ":" +
                                             std::to_string(line_number));
        }
        if (sys.entries.empty())
            throw FormatError("code list has no entries", path.filename().string());
        for (const auto& [code, label] : sys.entries)
            sys.codes.push_back(code);

        if (!systems_.emplace(stem, std::move(sys)).second)
            throw DuplicateCodeError("code system '" + stem + "' registered twice", path.string());
    }
}

CodeLookupResult Terminology::validate_code(const std::string& system_id,
                                            std::string_view code) const {
    const CodeSystem* sys = find(system_id);
    if (!sys)
        throw UnknownSystemError("unknown code system '" + system_id + "'");
    if (sys->enumerated) {
        auto it = sys->entries.find(std::string(code));
        if (it == sys->entries.end())
            return {false, std::nullopt, "not in enumeration"};
        return {true, it->second, std::nullopt};
    }
    return check_pattern(*sys->rule, code);
}

bool Terminology::has_system(const std::string& system_id) const {
    return systems_.count(system_id) != 0;
}

const CodeSystem* Terminology::find(const std::string& system_id) const {
    auto it = systems_.find(system_id);
    return it == systems_.end() ? nullptr : &it->second;
}

std::vector<std::string> Terminology::system_ids() const {
    std::vector<std::string> ids;
    ids.reserve(systems_.size());
    for (const auto& [id, sys] : systems_)
        ids.push_back(id);
    return ids;
}

} // namespace susehr
