#pragma once

#include <stdexcept>
#include <string>

namespace popdyn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad dimensions, negative entries, zero fertility,
/// violated mortality condition, out-of-domain arguments.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The operation needs a structural property (irreducible, primitive) that
/// the input pattern does not have.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Floating-point failure: singular elimination, overflow, a limit that did
/// not settle.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Power iteration ran out of budget. Carries the last Collatz-Wielandt
/// bracket, which still encloses the Perron root.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double lo, double hi, long iterations)
      : NumericError(what), lo_(lo), hi_(hi), iterations_(iterations) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double lo_;
  double hi_;
  long iterations_;
};

/// A result contradicts a property that must hold for valid input
/// (Perron-Frobenius consequences, pattern laws). Signals a bug or
/// numerical corruption upstream.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace popdyn
