#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace newton_lab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or multi-index dimension does not match the object it is used with.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A result-size guard refused to build an oversized object.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An iterative method stopped before reaching its target accuracy.
/// Carries the best value found so callers may still report it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_value)
      : Error(what), best_value_(best_value) {}
  double best_value() const noexcept { return best_value_; }

 private:
  double best_value_;
};

/// Gram matrix too ill-conditioned for the eigenvalue floor.
class IllConditioned : public Error {
 public:
  IllConditioned(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// A computed quantity violated a bound that holds mathematically; signals a solver bug.
class BoundViolation : public Error {
 public:
  using Error::Error;
};

/// Greedy covering could not reach full sample coverage within its budget.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, std::vector<std::vector<double>> witnesses)
      : Error(what), witnesses_(std::move(witnesses)) {}
  const std::vector<std::vector<double>>& uncovered() const noexcept { return witnesses_; }

 private:
  std::vector<std::vector<double>> witnesses_;
};

}  // namespace newton_lab
