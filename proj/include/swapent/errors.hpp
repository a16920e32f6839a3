#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swapent {

/// Base class of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error record.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error("shape_mismatch", what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("invalid_argument", what) {}
};

class LimitExceeded : public Error {
 public:
  explicit LimitExceeded(const std::string& what) : Error("limit_exceeded", what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error("non_convergence", what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// A projective outcome whose conditional probability is below the floor.
class ImpossibleOutcome : public Error {
 public:
  ImpossibleOutcome(std::size_t position, double probability)
      : Error("impossible_outcome",
              "outcome has conditional probability " + std::to_string(probability) +
                  " at position " + std::to_string(position)),
        position_(position),
        probability_(probability) {}
  std::size_t position() const noexcept { return position_; }
  double probability() const noexcept { return probability_; }

 private:
  std::size_t position_;
  double probability_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace swapent
