#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cyclegame {

// Bad input: parameters out of range, malformed files, unsupported requests.
// The CLI maps this family to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested computation is not defined for this input (e.g. the
// closed-form equilibrium of a matrix outside the cyclic family).
class UnsupportedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Row-level parse failure in an input file.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Numerical failures during a run. The CLI maps this family to exit code 1.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mean payoff vanished where the MS-replicator divides by it.
class SingularStateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegrationBlowupError : public NumericalError {
 public:
  IntegrationBlowupError(long step, const std::string& what)
      : NumericalError("integration blew up at step " + std::to_string(step) + ": " + what),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(double residual, const std::string& what)
      : NumericalError(what + " (last residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace cyclegame
