/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QDL_ERRORS_HPP
#define QDL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qdl {

/// Operand dimensions do not match.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the valid domain of an operation.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Requested size exceeds the dense-simulation envelope.
struct CapacityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input states are numerically linearly dependent.
struct DependenceError : std::runtime_error {
  int numerical_rank;
  DependenceError(const std::string& what, int rank)
      : std::runtime_error(what), numerical_rank(rank) {}
};

/// No unitary exists with the requested per-state phases.
struct InfeasiblePhaseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A perfect-training predicate was evaluated on an imperfect hypothesis.
struct NotPerfectlyTrainedError : std::runtime_error {
  double max_residual;
  NotPerfectlyTrainedError(const std::string& what, double residual)
      : std::runtime_error(what), max_residual(residual) {}
};

/// A Monte Carlo estimate could not be formed (e.g. no successful trials).
struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qdl

#endif
