#pragma once

#include <stdexcept>
#include <string>

namespace frametight {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A matrix that must be positive definite is numerically singular.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double smallest_eigenvalue)
      : Error(what), smallest_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const noexcept { return smallest_; }

 private:
  double smallest_;
};

/// The frame operator of a collection is singular (ranges do not span).
class NotAFrameError : public SingularityError {
 public:
  using SingularityError::SingularityError;
};

/// An iterative solver stopped before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved_residual)
      : Error(what), residual_(achieved_residual) {}
  double achieved_residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace frametight
