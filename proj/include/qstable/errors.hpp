#pragma once

#include <stdexcept>
#include <string>

namespace qstable {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad lengths, bad input data).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("division by zero") {}
};

/// Evaluation hit a zero of the denominator.
class PoleError : public Error {
public:
    explicit PoleError(const std::string& at)
        : Error("pole at q = " + at), point(at) {}
    std::string point;
};

class TruncationMismatch : public Error {
public:
    TruncationMismatch() : Error("incompatible truncation specs") {}
};

class NotInvertible : public Error {
public:
    NotInvertible() : Error("not invertible: zero constant term") {}
};

/// A result that the mathematics guarantees failed to materialise
/// (non-integral a_alpha, non-divisible orbit count, pole at q = 1, ...).
/// Always indicates a bug, never bad input.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace qstable
