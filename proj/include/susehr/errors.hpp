#pragma once

#include <stdexcept>
#include <string>

namespace susehr {

// Base class for all susehr exceptions. `where()` carries an optional
// source location ("file:line" or "line L, column C") when the error
// originates from parsing a document.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message, std::string where = {})
        : std::runtime_error(where.empty() ? message : where + ": " + message),
          where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

// rm-kernel
class SyntaxError : public Error { using Error::Error; };   // malformed document text
class ModelError : public Error { using Error::Error; };    // well-formed text violating a model invariant

// archetype-registry
class IdSyntaxError : public Error { using Error::Error; };
class SchemaSyntaxError : public Error { using Error::Error; };
class SchemaSemanticError : public Error { using Error::Error; };
class DuplicateIdError : public Error { using Error::Error; };
class DanglingParentError : public Error { using Error::Error; };
class TallyError : public Error { using Error::Error; };
class UnknownTemplateError : public Error { using Error::Error; };

// terminology
class UnknownSystemError : public Error { using Error::Error; };
class DuplicateCodeError : public Error { using Error::Error; };
class FormatError : public Error { using Error::Error; };

// ingestion
class ManifestSyntaxError : public Error { using Error::Error; };
class UnknownTargetError : public Error { using Error::Error; };
class TransformKindError : public Error { using Error::Error; };
class EncodingError : public Error { using Error::Error; };

} // namespace susehr
