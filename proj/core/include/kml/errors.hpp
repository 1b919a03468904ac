#pragma once

#include <stdexcept>
#include <string>

namespace kml {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (vector lengths, point dimensions, bases).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter or input value lies outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be positive semidefinite has an eigenvalue below tolerance.
class NotPositiveSemidefinite : public Error {
 public:
  NotPositiveSemidefinite(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// A value vector is not in the range of the Gram matrix (or feature map).
class NotInSpace : public Error {
 public:
  NotInSpace(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A function does not map the space into itself (or into the target space).
class NotAMultiplier : public Error {
 public:
  NotAMultiplier(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A generated sequence failed the consecutive-difference Cauchy test.
class NotCauchy : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown: near-singular operands or a failed bracket.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace kml
