// errors.hpp - exception types shared by the purcell library

#pragma once

#include <stdexcept>
#include <string>

namespace purcell {

/// Base of every library error. `numerical()` separates bad input from
/// numerical failure; the CLI maps them to exit codes 2 and 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    [[nodiscard]] virtual bool numerical() const noexcept { return true; }
};

class InputError : public Error {
public:
    using Error::Error;
    [[nodiscard]] bool numerical() const noexcept override { return false; }
};

class InvalidParams : public InputError {
public:
    using InputError::InputError;
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

class InvalidGrid : public InputError {
public:
    using InputError::InputError;
};

class WindowTooShort : public InputError {
public:
    using InputError::InputError;
};

/// Argument at (or within tolerance of) a pole of digamma / Hurwitz zeta,
/// or of the Laplace amplitude.
class PoleArgument : public Error {
public:
    using Error::Error;
};

class ResonanceSingularity : public Error {
public:
    using Error::Error;
};

class RequiresDamping : public Error {
public:
    using Error::Error;
};

class StepSizeTooLarge : public Error {
public:
    using Error::Error;
};

class BracketingFailure : public Error {
public:
    using Error::Error;
};

}  // namespace purcell
