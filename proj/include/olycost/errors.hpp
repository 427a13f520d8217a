#pragma once

#include <stdexcept>
#include <string>

namespace olycost {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input: malformed files, schema violations, arguments out of range.
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

// Numerical failure: degenerate samples, optimizer non-convergence.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

} // namespace olycost
