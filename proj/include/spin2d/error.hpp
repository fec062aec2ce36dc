#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spin2d {

// Base of every error raised by the library. The C API maps each subclass
// to a status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Jet orders do not line up, or a derivative would drop below order 0.
class OrderError : public Error {
 public:
  using Error::Error;
};

// A quantity that must be inverted (jet constant term, frame determinant)
// vanishes at the evaluation point.
class SingularError : public Error {
 public:
  using Error::Error;
};

// Analytic function evaluated at or next to a branch point / pole.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Expression syntax error. `offset` is the byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Spin group constraint a^2 + eta b^2 = 1 violated.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

// -1/4 grad_b(R e^{ab}) is not closed on the requested region.
class IntegrabilityError : public Error {
 public:
  IntegrabilityError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Integrator step too coarse for the local coefficient size, or a bad
// run parameter (lambda = 0, empty range).
class StepError : public Error {
 public:
  using Error::Error;
};

// Malformed verification config.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace spin2d
