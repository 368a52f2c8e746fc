#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace flola {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Infeasible configuration (scheme vs dimension, budget below initial design, ...).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Caller broke an operation's precondition.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Negative noise level or other out-of-domain numeric argument.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite responses or otherwise corrupt data.
class DataError : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

class DuplicatePointError : public Error {
 public:
  DuplicatePointError(const std::string& what, std::size_t existing_index, double distance)
      : Error(what), existing_index_(existing_index), distance_(distance) {}

  std::size_t existing_index() const noexcept { return existing_index_; }
  double distance() const noexcept { return distance_; }

 private:
  std::size_t existing_index_;
  double distance_;
};

class BudgetExhaustedError : public Error {
 public:
  using Error::Error;
};

/// The evaluator failed. The proposed point is kept so the caller can retry it.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::vector<double> point)
      : Error(what), point_(std::move(point)) {}

  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

}  // namespace flola
