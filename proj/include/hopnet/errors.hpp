#pragma once

#include <stdexcept>
#include <string>

namespace hopnet {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid numeric parameter (negative intensity, degenerate window, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input does not satisfy a structural precondition (e.g. an empty region).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Threshold bracket could not be found.
class SearchError : public Error {
public:
    using Error::Error;
};

/// Linear solver failed to reach the requested tolerance.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual, int iterations)
        : Error(what), residual_(residual), iterations_(iterations) {}
    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// Instance too large for an exhaustive routine.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Not enough samples for a statistical estimate.
class StatisticsError : public Error {
public:
    using Error::Error;
};

}  // namespace hopnet
