#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rescale {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong dimensions, non-finite entries, bad family spec.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Too few samples to estimate a covariance.
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// A matrix that must be SPD has an eigenvalue at or below the floor.
class SingularMatrix : public Error {
public:
    SingularMatrix(const std::string& what, double smallest_eigenvalue)
        : Error(what), smallest_eigenvalue_(smallest_eigenvalue) {}

    [[nodiscard]] double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

private:
    double smallest_eigenvalue_;
};

/// Jacobi sweeps exhausted without reaching the off-diagonal tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Text input could not be parsed; `line()` is 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// No oracle restart met its convergence criterion.
class OracleDidNotConverge : public Error {
public:
    OracleDidNotConverge(const std::string& what, double best_value)
        : Error(what), best_value_(best_value) {}

    [[nodiscard]] double best_value() const noexcept { return best_value_; }

private:
    double best_value_;
};

}  // namespace rescale
