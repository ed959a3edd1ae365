#pragma once

#include <stdexcept>
#include <string>

namespace adjoint_fp {

/// Bad run configuration (syntax or semantics). CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public ConfigError {
public:
    ParseError(int line, const std::string& message)
        : ConfigError("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class ValidationError : public ConfigError {
public:
    ValidationError(std::string field, const std::string& message)
        : ConfigError(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Failure of a numerical procedure. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonFiniteError : public NumericalError {
public:
    explicit NonFiniteError(double time)
        : NumericalError("non-finite value in state at t = " + std::to_string(time)), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

class StepUnderflowError : public NumericalError {
public:
    StepUnderflowError(double time, double dt)
        : NumericalError("automatic time step " + std::to_string(dt) + " underflows at t = " +
                         std::to_string(time)),
          time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

class NoConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// File system failure. CLI exit code 4.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two grid functions (or an operator and a function) live on different grids.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace adjoint_fp
