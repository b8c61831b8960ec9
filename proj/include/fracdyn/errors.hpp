#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracdyn {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An operation's documented precondition does not hold for the given inputs.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Series or quadrature did not reach the requested tolerance within budget.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigenvalue on the stability boundary: neither stable nor unstable.
class NonhyperbolicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state component left the finite range or exceeded the blow-up bound.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t step, double time)
      : std::runtime_error(what), step_(step), time_(time) {}

  [[nodiscard]] std::size_t step() const noexcept { return step_; }
  [[nodiscard]] double time() const noexcept { return time_; }

 private:
  std::size_t step_;
  double time_;
};

}  // namespace fracdyn
