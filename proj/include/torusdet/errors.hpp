#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace torusdet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A difference order or operator order outside its admissible range.
class InvalidOrder : public Error {
 public:
  using Error::Error;
};

/// Hill problems need nu > n for the damped matrix to be summable.
class InfeasibleOrder : public Error {
 public:
  using Error::Error;
};

/// Requested Fourier window cannot be resolved on the sampling grid.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// The matrix of a symbol has infinite l1 mass.
class NotSummable : public Error {
 public:
  using Error::Error;
};

class UnsupportedRepresentation : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NoNullSolution : public Error {
 public:
  NoNullSolution(const std::string& what, double smallest_singular_value)
      : Error(what), singular_value(smallest_singular_value) {}
  double singular_value;
};

/// Malformed input document. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line_no = 0, std::string field_name = {})
      : Error(what), line(line_no), field(std::move(field_name)) {}
  std::size_t line;
  std::string field;
};

/// Well-formed input that violates an invariant of the target type.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace torusdet
