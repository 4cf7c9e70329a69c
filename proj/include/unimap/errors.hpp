#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace unimap {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnknownIdentifier : public SyntaxError {
public:
    UnknownIdentifier(const std::string& name, std::size_t offset)
        : SyntaxError("unknown identifier '" + name + "'", offset), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class EvalError : public Error {
public:
    using Error::Error;
};

/// Raised by derivative evaluation at a kink of abs().
class NonDifferentiable : public EvalError {
public:
    explicit NonDifferentiable(double t)
        : EvalError("abs() argument vanishes at t = " + std::to_string(t)), t_(t) {}
    double at() const noexcept { return t_; }

private:
    double t_;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

class ReductionError : public Error {
public:
    using Error::Error;
};

class PreconditionViolation : public Error {
public:
    using Error::Error;
};

class BandViolation : public PreconditionViolation {
public:
    using PreconditionViolation::PreconditionViolation;
};

class FixedPointInput : public PreconditionViolation {
public:
    using PreconditionViolation::PreconditionViolation;
};

class NotFree : public Error {
public:
    using Error::Error;
};

class CocycleOverflow : public Error {
public:
    using Error::Error;
};

class NotUP1 : public Error {
public:
    using Error::Error;
};

class BadMu : public Error {
public:
    using Error::Error;
};

}  // namespace unimap
