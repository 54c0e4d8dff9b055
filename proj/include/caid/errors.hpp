#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace caid {

// Rule number, radius or other numeric argument outside its domain.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Malformed call: mismatched lengths, non-increasing time steps, bad gaps.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An exhaustive operation would exceed its caller-supplied budget.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input data that cannot be read as an observation set.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    // 1-based; 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Invalid configuration: unknown keys, wrong types, violated invariants.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace caid
