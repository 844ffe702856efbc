#pragma once

#include <stdexcept>
#include <string>

namespace pfword {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched word lengths or incompatible alphabets.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside an operation's domain (bad parameters, empty classes).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed textual or JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A word that is not a feasible trajectory of the given chain.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

// Requested sampling from a distance class that contains no words.
class EmptyClassError : public Error {
 public:
  using Error::Error;
};

// Instance exceeds a brute-force oracle's enumeration cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A numeric routine failed its error target; carries the best estimate and
// the achieved error bound so callers can decide what to do with them.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double estimate, double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

// Filesystem failures (unreadable chain file, unwritable output path).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pfword
