#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace risim {

/// Precondition, shape, or configuration violation.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed external input (CSI captures, config files). Carries the 1-based
/// line number when the failing line is known.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& message, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Numerical failure (e.g. SVD iteration cap hit). Carries the residual that
/// remained when the computation gave up.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& message, double residual)
        : std::runtime_error(message + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Filesystem / stream failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace risim
