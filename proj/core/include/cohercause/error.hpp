#pragma once

#include <stdexcept>
#include <string>

namespace cohercause {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Block shapes or dimensions that do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be positive (semi)definite is not, even after jitter.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// Too few samples for the requested statistic (Wilks solvency, rank).
class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

/// Two algebraically equivalent routes disagree beyond tolerance.
class NumericalInconsistency : public Error {
 public:
  using Error::Error;
};

/// Bad argument outside any of the categories above.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. The message carries the offending line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cohercause
