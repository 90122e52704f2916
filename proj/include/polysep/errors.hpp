#pragma once

#include <stdexcept>
#include <string>

namespace polysep {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-conformable shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Bad argument value (negative order, empty root list, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Matrix singular to working precision.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// Iterative kernel failed to converge.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, int iterations = 0)
      : Error(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Nearly coincident roots or nodes.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Overflow in a matrix function.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A checkable certificate (contour, level set, separation) did not verify.
class CertificateError : public Error {
 public:
  using Error::Error;
};

/// Method preconditions do not hold for the given problem.
class ApplicabilityError : public Error {
 public:
  using Error::Error;
};

/// Spectra of A and B overlap to working precision.
class SpectralOverlapError : public ApplicabilityError {
 public:
  using ApplicabilityError::ApplicabilityError;
};

/// Malformed configuration input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace polysep
