#ifndef FIELDLINT_ERROR_HPP
#define FIELDLINT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fieldlint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An index name used more than twice in a monomial, a repeated index with
/// equal variance, or a sum whose terms carry different free indices.
class IndexDisciplineError : public Error {
 public:
  using Error::Error;
};

/// DSL syntax or resolution failure, with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UndeclaredSymbolError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A construct the engine deliberately does not handle (second-order
/// Lagrangians, spinor numerics, unsupported spinor orderings, ...).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Missing or invalid numeric field configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a point where a closed-form profile is singular.
class SingularityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// On-shell rewriting did not reach a fixpoint.
class ReductionError : public Error {
 public:
  using Error::Error;
};

}  // namespace fieldlint

#endif  // FIELDLINT_ERROR_HPP
