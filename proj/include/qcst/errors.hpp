#pragma once

#include <stdexcept>
#include <string>

namespace qcst {

/// Thrown when an operation receives input violating its preconditions.
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a request exceeds a configured resource cap.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by block extraction when mass outside the embedded block exceeds
/// tolerance. Carries the leaked mass so callers can decide what to do.
class BlockLeakageError : public std::runtime_error {
public:
    BlockLeakageError(const std::string& what, double leaked)
        : std::runtime_error(what), leaked_mass(leaked) {}
    double leaked_mass;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qcst
