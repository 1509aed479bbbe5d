#pragma once

#include <stdexcept>
#include <string>

namespace qdot {

/// Base class for all library failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the supported domain.
struct DomainError : Error {
    using Error::Error;
};

/// A closed form was requested outside the parameter region where it exists.
struct RegimeError : Error {
    using Error::Error;
};

/// Quadrature stopped before reaching the requested tolerance.
/// Carries the partial result and its error estimate.
struct ConvergenceError : Error {
    double partial_value;
    double error_estimate;
    ConvergenceError(const std::string& msg, double partial, double err)
        : Error(msg), partial_value(partial), error_estimate(err) {}
};

/// A series summation grew instead of decaying.
struct DivergenceError : Error {
    using Error::Error;
};

/// Low-temperature enumeration window too small for the requested parameters.
struct WindowError : Error {
    using Error::Error;
};

enum class Exec { serial, parallel };

}  // namespace qdot
