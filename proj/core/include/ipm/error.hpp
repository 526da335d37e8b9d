#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ipm {

/// Bad input: a parameter, field or file violates a documented invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A time integration left its admissible regime (CFL guard, blow-up
/// surveillance, non-finite state, folded flow map).
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, int step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

/// Fixed-point inversion of a flow map did not reach its tolerance.
class InversionError : public std::runtime_error {
 public:
  InversionError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed snapshot content; offset is the byte position of the problem.
class SnapshotFormatError : public IoError {
 public:
  SnapshotFormatError(const std::string& what, std::size_t offset)
      : IoError(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace ipm
