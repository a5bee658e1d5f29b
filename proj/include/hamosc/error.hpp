#pragma once

#include <stdexcept>
#include <string>

namespace hamosc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NotPSD : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class RankTooLow : public Error {
 public:
  using Error::Error;
};

/// Evaluation of an expression left its mathematical domain.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double t)
      : Error(what + " at t=" + std::to_string(t)), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

/// Adaptive integrator could not continue without a blow-up in magnitude.
class NumericalBreakdown : public Error {
 public:
  NumericalBreakdown(const std::string& what, double t)
      : Error(what + " at t=" + std::to_string(t)), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

/// Malformed input document (problem file, weight file, initial data).
class SchemaError : public Error {
 public:
  using Error::Error;
};

class HermitianViolation : public Error {
 public:
  HermitianViolation(std::string matrix, double t, double residual)
      : Error("matrix " + matrix + " is not Hermitian at t=" +
              std::to_string(t) + " (residual " + std::to_string(residual) +
              ")"),
        matrix_(std::move(matrix)),
        t_(t),
        residual_(residual) {}
  const std::string& matrix() const { return matrix_; }
  double t() const { return t_; }
  double residual() const { return residual_; }

 private:
  std::string matrix_;
  double t_;
  double residual_;
};

class HypothesisNotSatisfied : public Error {
 public:
  using Error::Error;
};

}  // namespace hamosc
