#pragma once

#include <stdexcept>
#include <string>

namespace htensor {

/// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Incompatible or invalid tensor shapes, modes, or indices.
struct ShapeError : Error {
    using Error::Error;
};

/// Malformed serialized input (bad header, entry count mismatch, rejected values).
struct ParseError : Error {
    using Error::Error;
};

/// A pivot fell below the singularity threshold during factorization.
struct SingularError : Error {
    using Error::Error;
};

/// Precondition violation on otherwise well-formed input (size guards,
/// non-antisymmetric input to a decomposition, ...).
struct DomainError : Error {
    using Error::Error;
};

}  // namespace htensor
