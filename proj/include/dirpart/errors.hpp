#pragma once

#include <stdexcept>
#include <string>

namespace dirpart {

/// Invalid caller-supplied data: bad dimensions, malformed files,
/// out-of-range parameters, exceeded enumeration budgets.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Structurally valid input the requested operator family cannot handle,
/// e.g. a zero-degree vertex with r > 0, or a scale-based alpha policy on a
/// disconnected graph.
class DegenerateInputError : public InputError {
public:
  using InputError::InputError;
};

/// Iterative eigensolver exhausted its matvec budget before reaching the
/// residual tolerance. Carries the best residual seen so the caller can
/// decide whether the partial answer is usable.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& msg, double best_residual, int matvecs)
      : std::runtime_error(msg), best_residual_(best_residual), matvecs_(matvecs) {}

  double best_residual() const { return best_residual_; }
  int matvecs() const { return matvecs_; }

private:
  double best_residual_;
  int matvecs_;
};

} // namespace dirpart
