#pragma once

#include <stdexcept>
#include <string>

namespace fluxlab {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the inputs is violated: wrong shapes, parameters outside
/// the existence domain of a solution, invalid settings.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative or numerical procedure failed: Newton did not converge, a
/// linear system is singular, an eigensolver reported failure, a run blew up.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : NumericalError(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(const std::string& what, double rcond)
      : NumericalError(what), rcond_(rcond) {}
  /// Reciprocal condition estimate (1-norm) at the time of failure.
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

}  // namespace fluxlab
