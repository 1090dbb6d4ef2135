#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace minmove {

using Int = std::int64_t;

/// Base class for every error raised by the library. Callers that only care
/// about "something was wrong with the input" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input (formula, election, referendum or society files).
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace minmove
