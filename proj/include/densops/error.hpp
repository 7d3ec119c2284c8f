#pragma once

#include <stdexcept>
#include <string>

namespace densops {

/// Base for every error raised by the library on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coordinate or derivative index outside the chart.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Numeric evaluation outside the domain of a function (log of a non-positive value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operator has the wrong shape or order for the requested construction.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// Pencil reconstruction requested at one of the excluded weights 0, 1/2, 1.
class ForbiddenWeightError : public Error {
 public:
  using Error::Error;
};

/// Principal symbol block S is not invertible.
class DegenerateSymbolError : public Error {
 public:
  using Error::Error;
};

/// S gamma = B has no solution at some sample point.
class InconsistentSystemError : public DegenerateSymbolError {
 public:
  using DegenerateSymbolError::DegenerateSymbolError;
};

/// Integrand cannot be integrated over the requested domain.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace densops
