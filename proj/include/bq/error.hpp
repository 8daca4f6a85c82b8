#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bq {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed DSL or JSON input. Line and column are 1-based; 0 when unknown.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

  private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        if (line == 0) {
            return what;
        }
        return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

/// A structurally valid request that violates an operation's precondition
/// (cyclic quiver, non-admissible generator, field mismatch, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

} // namespace bq
