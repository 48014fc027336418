#pragma once

#include <stdexcept>
#include <string>

namespace simploc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A construction tree, datum or table violates a structural invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Unknown library entry, table or preset name.
class LookupError : public Error {
public:
  using Error::Error;
};

/// Argument outside the admissible range of an operation.
class RangeError : public Error {
public:
  using Error::Error;
};

/// The requested computation is outside the supported fragment.
class UnsupportedError : public Error {
public:
  using Error::Error;
};

/// Not enough data to determine a value (missing comparison map, missing oracle).
class UnderdeterminedError : public Error {
public:
  using Error::Error;
};

/// A theorem was invoked without its hypotheses being satisfied.
class HypothesisError : public Error {
public:
  using Error::Error;
};

/// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        message_(message),
        line_(line),
        column_(column) {}

  /// Message without the position prefix.
  const std::string& message() const noexcept { return message_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  std::string message_;
  int line_;
  int column_;
};

}  // namespace simploc
