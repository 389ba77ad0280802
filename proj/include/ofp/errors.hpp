#pragma once

#include <stdexcept>
#include <string>

namespace ofp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two grid functions with different resolutions met in a binary operation.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the domain of a function, modulus or operator.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Iteration budget exhausted, or the final residual exceeds its threshold.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// An operator broke its declared monotonicity at runtime.
class MonotonicityError : public Error {
public:
    using Error::Error;
};

/// A sampler handed a checker an input that violates the checker's precondition.
class SamplerError : public Error {
public:
    using Error::Error;
};

} // namespace ofp
