#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace upo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hyperparameter or physical parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A grid index outside the configured bounds.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition (e.g. a local model without a measured center).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A root finder or other numerical routine could not produce a result.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

/// Several grid points share the maximal value, so the maximizer is not unique.
class NonUniqueMaximizer : public Error {
 public:
  NonUniqueMaximizer(std::int64_t k, std::int64_t first, std::int64_t second);

  std::int64_t time() const { return time_; }
  std::int64_t first() const { return first_; }
  std::int64_t second() const { return second_; }

 private:
  std::int64_t time_;
  std::int64_t first_;
  std::int64_t second_;
};

/// An objective does not satisfy a curvature / drift / uniqueness assumption.
/// Carries the witness point at which the check failed.
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(const std::string& what, std::int64_t k, std::int64_t index);

  std::int64_t time() const { return time_; }
  std::int64_t index() const { return index_; }

 private:
  std::int64_t time_;
  std::int64_t index_;
};

/// Malformed or invalid experiment configuration. `line()` is 0 when the
/// problem is not tied to a specific line (e.g. a missing key).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace upo
