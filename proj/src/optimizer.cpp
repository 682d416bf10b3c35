/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qdl/optimizer.hpp"

#include <cmath>
#include <numbers>

#include "qdl/errors.hpp"

namespace qdl {

std::pair<RealVector, AdamState> adam_step(const RealVector& theta,
                                           const RealVector& grad,
                                           const AdamState& state,
                                           const AdamConfig& config) {
  if (theta.size() != grad.size())
    throw ShapeError("adam_step: theta/gradient length mismatch");
  AdamState next;
  next.t = state.t + 1;
  if (state.m.size() == 0) {
    next.m = RealVector::Zero(theta.size());
    next.v = RealVector::Zero(theta.size());
  } else {
    if (state.m.size() != theta.size() || state.v.size() != theta.size())
      throw ShapeError("adam_step: moment length mismatch");
    next.m = state.m;
    next.v = state.v;
  }
  next.m = config.beta1 * next.m + (1.0 - config.beta1) * grad;
  next.v = config.beta2 * next.v.array().matrix() +
           (1.0 - config.beta2) * grad.cwiseProduct(grad);
  const Real mc = 1.0 - std::pow(config.beta1, static_cast<Real>(next.t));
  const Real vc = 1.0 - std::pow(config.beta2, static_cast<Real>(next.t));
  const RealVector mhat = next.m / mc;
  const RealVector vhat = next.v / vc;
  RealVector out = theta;
  out.array() -= config.learning_rate * mhat.array() /
                 (vhat.array().sqrt() + config.epsilon);
  return {out, next};
}

namespace {

// Central-difference probe of the analytic gradient, used as a spot check at
// iteration 0 when the config asks for it.
RealVector finite_difference_gradient(Protocol protocol, ParamCircuit circuit,
                                      const Dataset& ds, const Observable* obs,
                                      Real h) {
  RealVector g(circuit.num_params());
  for (int i = 0; i < circuit.num_params(); ++i) {
    const Real saved = circuit.theta(i);
    circuit.theta(i) = saved + h;
    const Real up = loss_value(protocol, circuit, ds, obs);
    circuit.theta(i) = saved - h;
    const Real down = loss_value(protocol, circuit, ds, obs);
    circuit.theta(i) = saved;
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace

std::pair<ParamCircuit, TrainingTrace> train(Protocol protocol, const Dataset& ds,
                                             const ParamCircuit& circuit,
                                             const AdamConfig& config,
                                             const Observable* obs,
                                             SeededRng* init_rng) {
  ParamCircuit current = circuit;
  if (init_rng != nullptr)
    for (Eigen::Index i = 0; i < current.theta.size(); ++i)
      current.theta(i) = init_rng->uniform(0.0, 2.0 * std::numbers::pi);

  TrainingTrace trace;
  Real best = loss_value(protocol, current, ds, obs);
  RealVector best_theta = current.theta;
  trace.loss_history.emplace_back(0, best);

  AdamState state;
  long t = 0;
  while (best > config.target_loss && t < config.max_iterations) {
    RealVector grad = loss_gradient(protocol, current, ds, obs);
    if (config.check_gradient && t == 0) {
      const RealVector fd = finite_difference_gradient(protocol, current, ds, obs, 1e-5);
      const Real scale = std::max(fd.cwiseAbs().maxCoeff(), 1e-8);
      if ((grad - fd).cwiseAbs().maxCoeff() / scale > 1e-4)
        throw DomainError("train: analytic gradient disagrees with finite differences");
    }
    auto [theta, next_state] = adam_step(current.theta, grad, state, config);
    current.theta = std::move(theta);
    state = std::move(next_state);
    ++t;
    const Real loss = loss_value(protocol, current, ds, obs);
    if (loss < best) {
      best = loss;
      best_theta = current.theta;
    }
    if (t % config.trace_stride == 0 || best <= config.target_loss ||
        t == config.max_iterations)
      trace.loss_history.emplace_back(t, best);
  }

  current.theta = best_theta;
  trace.final_loss = best;
  trace.iterations_used = t;
  trace.converged = best <= config.target_loss;
  return {current, trace};
}

}  // namespace qdl
