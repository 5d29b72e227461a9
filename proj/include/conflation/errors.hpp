#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conflation {

/// Malformed input: bad measure, bad classification, violated precondition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Problem size exceeds an exact-enumeration cap.
class CapacityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// An iterative solver ran out of iterations; carries the residuals at stop.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, std::size_t iterations, double residual)
        : std::runtime_error(what), iterations(iterations), residual(residual) {}

    std::size_t iterations;
    double residual;
};

}  // namespace conflation
