#pragma once

#include <stdexcept>
#include <string>

namespace nkspin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (zero quaternion,
/// non-orthogonal matrix, mismatched base points, bad family parameters).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Logarithm requested at the cut locus of the identity.
class BranchError : public DomainError {
public:
    using DomainError::DomainError;
};

/// An analytic differential was requested but none is registered.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// A field or immersion degenerates (vanishing spinor, zero speed, singular Gram).
class DegeneracyError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Numerical result contradicts an identity that must hold under the preconditions.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Non-finite integrand value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

}  // namespace nkspin
