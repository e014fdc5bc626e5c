#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace unravel {

/// Caller handed us something that violates a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A property that the construction guarantees turned out false.
/// Seeing one of these means there is a bug in this library.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A configured size cap (Z_MAX, NODE_MAX) would be exceeded.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A covering was asked to certify a set it does not unravel.
class NotUnraveled : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public InvalidInput {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : InvalidInput(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace unravel
