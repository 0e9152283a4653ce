#ifndef HETNAS_ERRORS_HPP
#define HETNAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hetnas {

// Base of all library errors. The three direct subclasses map onto the CLI
// exit codes: ParseError -> 2, ValidationError -> 3, InfeasibleError -> 4.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

struct InfeasibleError : Error {
    explicit InfeasibleError(const std::string& msg) : Error(msg) {}
};

struct InvalidChoice : ValidationError {
    explicit InvalidChoice(const std::string& msg) : ValidationError(msg) {}
};

struct MissingKind : ValidationError {
    explicit MissingKind(const std::string& kind)
        : ValidationError("profile is missing layer kind: " + kind) {}
};

struct NonPositivePeak : ValidationError {
    explicit NonPositivePeak(const std::string& field)
        : ValidationError("non-positive rate in field: " + field) {}
};

struct DegenerateSamples : ValidationError {
    explicit DegenerateSamples(const std::string& msg) : ValidationError(msg) {}
};

struct UnsupportedKind : ValidationError {
    explicit UnsupportedKind(const std::string& msg) : ValidationError(msg) {}
};

struct CapacityExceeded : InfeasibleError {
    explicit CapacityExceeded(const std::string& msg) : InfeasibleError(msg) {}
};

struct EmptyOutput : ValidationError {
    explicit EmptyOutput(const std::string& msg) : ValidationError(msg) {}
};

struct TooLarge : ValidationError {
    explicit TooLarge(const std::string& msg) : ValidationError(msg) {}
};

struct EmptyFeasibleSet : InfeasibleError {
    explicit EmptyFeasibleSet(const std::string& msg) : InfeasibleError(msg) {}
};

struct BadReference : ValidationError {
    explicit BadReference(const std::string& msg) : ValidationError(msg) {}
};

struct InfeasibleCapacity : InfeasibleError {
    explicit InfeasibleCapacity(const std::string& msg) : InfeasibleError(msg) {}
};

}  // namespace hetnas

#endif  // HETNAS_ERRORS_HPP
