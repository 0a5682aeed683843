#pragma once

#include <stdexcept>
#include <string>

namespace lnabla {

/// Base class for all engine errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not match (dimension, truncation order, index range).
class StructureError : public Error {
public:
    using Error::Error;
};

/// A quantity that must be invertible or positive is not (zero constant
/// term, degenerate metric, vanishing determinant).
class SingularityError : public Error {
public:
    using Error::Error;
};

/// An operation would consume more derivative information than the
/// operand carries.
class OrderError : public Error {
public:
    using Error::Error;
};

/// The base dimension is outside the supported range of an operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An input violates a documented hypothesis (non-adapted base point,
/// base-point mismatch in a composition, point outside a chart).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Malformed user input: unknown suite or generator name, bad config or
/// flag syntax. The CLI maps this to exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace lnabla
