#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace susehr {

// Structural code-shape rules for the established Brazilian coding systems.
// Only the shape is validated; shipping the full code tables is out of scope.
enum class PatternRule {
    Icd10,  // uppercase letter + 2 digits + optional '.' + 1-2 digits
    Sigtap, // 10 digits
    Cnes,   // 7 digits
};

struct CodeSystem {
    std::string id;
    bool enumerated = false;
    std::optional<PatternRule> rule;          // pattern-based systems
    std::string pattern;                      // human-readable shape rule
    std::map<std::string, std::string> entries; // code -> Portuguese label
    std::vector<std::string> codes;           // sorted code list (enumerated)
};

struct CodeLookupResult {
    bool valid = false;
    std::optional<std::string> display; // enumerated systems, valid codes only
    std::optional<std::string> reason;  // invalid codes only
};

class Terminology {
public:
    // Registers the three pattern-based systems (ICD10, SIGTAP, CNES).
    static Terminology with_builtin_patterns();

    // Loads every *.tsv flat definition file in `dir` as an enumerated
    // system; the system id is the file stem upper-cased ("sus-gender.tsv"
    // -> "SUS-GENDER"). Format: code<TAB>label, UTF-8, '#' comments.
    // Throws DuplicateCodeError or FormatError (position-reported).
    void load_code_lists(const std::filesystem::path& dir);

    // Pattern systems check the code shape; enumerated systems check
    // membership and return the label. Throws UnknownSystemError.
    CodeLookupResult validate_code(const std::string& system_id, std::string_view code) const;

    bool has_system(const std::string& system_id) const;
    const CodeSystem* find(const std::string& system_id) const;
    std::vector<std::string> system_ids() const;

private:
    std::map<std::string, CodeSystem> systems_;
};

} // namespace susehr
