#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace minispice {

enum class SolverErrorKind {
  Singular,
  NoConvergence,
  DimensionMismatch,
  UnknownSource,
  NonlinearDeck,
  UnbalancedNeumann,
  InvalidArgument,
};

std::string_view to_string(SolverErrorKind kind);

// Numerical or analysis-setup failure. Carries enough context for the CLI to
// report "where" (column of a failed pivot, simulated time of a failed step).
class SolverError : public std::runtime_error {
 public:
  SolverError(SolverErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  SolverErrorKind kind() const noexcept { return kind_; }

  // 1-based pivot column for Singular, 0 otherwise.
  std::size_t column = 0;
  // Best KCL residual reached before giving up, for NoConvergence.
  double best_residual = 0.0;
  // Simulated time of the failing transient step, negative when not transient.
  double time = -1.0;

 private:
  SolverErrorKind kind_;
};

}  // namespace minispice
