#pragma once

#include <stdexcept>
#include <string>

namespace fracplate {

/// Argument outside the mathematical domain of an operation (poles, alpha out of range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller violated a documented precondition (grid too coarse, point not on the boundary, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every evaluation strategy failed to reach its accuracy target.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double partial, double partial_error)
      : std::runtime_error(what), partial_(partial), partial_error_(partial_error) {}

  double partial() const noexcept { return partial_; }
  double partial_error() const noexcept { return partial_error_; }

 private:
  double partial_;
  double partial_error_;
};

}  // namespace fracplate
