#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace bundle_lab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An index beyond what a finite weight list or truncation can provide.
class TruncationRangeError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver or continuation failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A numerical consistency check between two independent routes failed.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (expressions, presets, configs).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

}  // namespace bundle_lab
