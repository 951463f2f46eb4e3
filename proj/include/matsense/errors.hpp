#pragma once

#include <stdexcept>
#include <string>

namespace matsense {

/// Bad arguments or inputs that violate a precondition.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A hyperbolic evaluation left the exp-safe range of double precision.
/// Carries the offending index (measurement) or eigenvalue when known.
class Overflow : public std::runtime_error {
 public:
  explicit Overflow(const std::string& msg, long index = -1, double value = 0.0)
      : std::runtime_error(msg), index_(index), value_(value) {}
  long index() const { return index_; }
  double value() const { return value_; }

 private:
  long index_;
  double value_;
};

/// Rejection sampling exhausted its retry budget.
class GenerationFailed : public std::runtime_error {
 public:
  explicit GenerationFailed(const std::string& msg) : std::runtime_error(msg) {}
};

/// The gradient vanished: all residuals are zero, the instance is solved.
class AlreadyStationary : public std::runtime_error {
 public:
  AlreadyStationary() : std::runtime_error("gradient norm is zero; iterate is already a solution") {}
};

}  // namespace matsense
