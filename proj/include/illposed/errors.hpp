#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace illposed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition or configuration value is out of range.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A multiplier or weight overflowed the floating range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// An evaluation produced a value that cannot be right (e.g. a complex residue
/// where the result must be real).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A regularization parameter choice violates the admissibility limits.
class AdmissibilityError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Picard iteration did not reach the requested tolerance.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> residuals)
        : Error(what), residuals_(std::move(residuals)) {}

    [[nodiscard]] const std::vector<double>& residual_history() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

}  // namespace illposed
