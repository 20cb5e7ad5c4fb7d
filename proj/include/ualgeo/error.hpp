#pragma once

#include <stdexcept>
#include <string>

namespace ualgeo {

// Values double as CLI exit codes.
enum class ErrorKind {
    Parse = 1,
    Semantic = 2,
    Budget = 4,
    Precondition = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

// Syntax errors carry a 1-based source position.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(ErrorKind::Parse, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          detail_(message),
          line_(line),
          column_(column) {}

    // The message without the position prefix.
    const std::string& detail() const noexcept { return detail_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string detail_;
    std::size_t line_;
    std::size_t column_;
};

// Thrown when a size budget would be exceeded. `partial` reports how far the
// computation got (element count, lattice size, ...).
class BudgetError : public Error {
public:
    BudgetError(const std::string& message, std::size_t partial)
        : Error(ErrorKind::Budget, message + " (partial count " + std::to_string(partial) + ")"),
          partial_(partial) {}

    std::size_t partial() const noexcept { return partial_; }

private:
    std::size_t partial_;
};

}  // namespace ualgeo
