#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace opilab {

/// Base of every error the library raises on bad inputs or failed numerics.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

class EigenSolverError : public Error {
public:
    using Error::Error;
};

class NotStrictlyOrdered : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class ConstantFunction : public Error {
public:
    using Error::Error;
};

class InfeasibleSpec : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// A spectrum or scalar argument fell outside (or too close to the edge of)
/// a function's domain. Carries the offending values.
class DomainViolation : public Error {
public:
    DomainViolation(const std::string& what, std::vector<double> offending)
        : Error(what), offending_(std::move(offending)) {}

    const std::vector<double>& offending() const noexcept { return offending_; }

private:
    std::vector<double> offending_;
};

/// Furuta exponent triple failed a validity predicate. The message names each
/// violated inequality, e.g. "q ≥ 1 violated".
class ExponentDomainViolation : public Error {
public:
    ExponentDomainViolation(const std::string& what, std::vector<std::string> violated)
        : Error(what), violated_(std::move(violated)) {}

    const std::vector<std::string>& violated() const noexcept { return violated_; }

private:
    std::vector<std::string> violated_;
};

}  // namespace opilab
