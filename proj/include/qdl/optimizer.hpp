/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QDL_OPTIMIZER_HPP
#define QDL_OPTIMIZER_HPP

#include <optional>
#include <utility>
#include <vector>

#include "qdl/gradient.hpp"
#include "qdl/protocols.hpp"

namespace qdl {

struct AdamConfig {
  Real learning_rate = 0.01;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real epsilon = 1e-8;
  long max_iterations = 1000;
  Real target_loss = 1e-6;
  long trace_stride = 10;        // loss-history decimation
  bool check_gradient = false;   // finite-difference spot check at iteration 0
};

struct AdamState {
  RealVector m;
  RealVector v;
  long t = 0;
};

/// One bias-corrected ADAM update. Pure function of its inputs.
/// Throws ShapeError when the vector lengths disagree.
std::pair<RealVector, AdamState> adam_step(const RealVector& theta,
                                           const RealVector& grad,
                                           const AdamState& state,
                                           const AdamConfig& config);

struct TrainingTrace {
  Real final_loss = 0.0;
  long iterations_used = 0;
  std::vector<std::pair<long, Real>> loss_history;  // decimated (iteration, loss)
  bool converged = false;
};

/// Single gradient descent on the protocol loss. Stops when the best-seen
/// loss reaches config.target_loss or after max_iterations, and returns the
/// best-seen parameters (the reported sequence is monotone). If init_rng is
/// given, theta is re-initialized uniformly in [0, 2*pi); otherwise the
/// circuit's parameters are used as the starting point. Non-convergence is a
/// reported state, not an error.
std::pair<ParamCircuit, TrainingTrace> train(Protocol protocol,
                                             const Dataset& dataset,
                                             const ParamCircuit& circuit,
                                             const AdamConfig& config,
                                             const Observable* obs = nullptr,
                                             SeededRng* init_rng = nullptr);

}  // namespace qdl

#endif
