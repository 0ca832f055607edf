#pragma once

#include <stdexcept>
#include <string>

namespace kbfocus {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input bytes (JSON/CSV/N-Triples/.cxt syntax).
struct ParseError : Error {
    using Error::Error;
};

// Structurally well-formed input that violates a model invariant
// (duplicate ids, unresolved references, cyclic hierarchies, ...).
struct ValidationError : Error {
    using Error::Error;
};

// Reference to an entity type or property that does not exist.
struct LookupError : ValidationError {
    using ValidationError::ValidationError;
};

// Metric whose denominator is empty for the given schema.
struct UndefinedMetricError : Error {
    using Error::Error;
};

} // namespace kbfocus
