#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lapflow {

/// Base of every exception the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (shape, index range, graph invariant).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not deliver its accuracy contract.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Matrix exponential (or a propagated state) left the representable range.
class SaturationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Malformed external input. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace lapflow
