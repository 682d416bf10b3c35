/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qdl/gradient.hpp"

#include <cmath>
#include <numbers>

#include "qdl/errors.hpp"

namespace qdl {

namespace {
constexpr Real kHalfPi = std::numbers::pi / 2.0;
}

RealVector loss_gradient(Protocol protocol, const ParamCircuit& circuit,
                         const Dataset& ds, const Observable* obs) {
  if (protocol == Protocol::CLC && obs == nullptr)
    throw DomainError("loss_gradient: CLC requires an observable");
  if (ds.dim() != circuit.dim())
    throw ShapeError("loss_gradient: dataset dimension does not match circuit");

  const int d = circuit.dim();
  const int m = static_cast<int>(circuit.gates.size());
  const int N = ds.size();

  // Inputs the shifted circuits act on: the training states for CLC/REQU,
  // the stored responses U†|psi_j> for QU.
  const std::vector<State>& inputs =
      protocol == Protocol::QU ? ds.state_responses : ds.states;

  std::vector<Matrix> mats(m);
  for (int i = 0; i < m; ++i)
    mats[i] = gate_matrix(circuit.gates[i], circuit.theta, circuit.n);

  std::vector<Matrix> prefix(m + 1), suffix(m + 1);
  prefix[0] = Matrix::Identity(d, d);
  for (int i = 0; i < m; ++i) prefix[i + 1] = mats[i] * prefix[i];
  suffix[m] = Matrix::Identity(d, d);
  for (int i = m - 1; i >= 0; --i) suffix[i] = suffix[i + 1] * mats[i];

  // Unshifted expectations, needed by the CLC chain rule.
  std::vector<RealVector> clc_e;
  if (protocol == Protocol::CLC) {
    const Matrix& V = prefix[m];
    clc_e.resize(N);
    for (int j = 0; j < N; ++j) {
      RealVector e(obs->rank());
      const State out = V * ds.states[j];
      int idx = 0;
      for (int q : obs->support()) e(idx++) = std::norm(obs->eigenvectors().col(q).dot(out));
      clc_e[j] = std::move(e);
    }
  }

  auto shifted_term = [&](const Matrix& Vpm) -> Real {
    Real acc = 0;
    switch (protocol) {
      case Protocol::REQU:
        for (int j = 0; j < N; ++j)
          acc += std::norm(ds.state_responses[j].dot(Vpm * ds.states[j]));
        break;
      case Protocol::QU:
        for (int j = 0; j < N; ++j)
          acc += std::norm(ds.states[j].dot(Vpm * inputs[j]));
        break;
      case Protocol::CLC:
        for (int j = 0; j < N; ++j) {
          const State out = Vpm * ds.states[j];
          int idx = 0;
          for (int q : obs->support()) {
            const Real e = std::norm(obs->eigenvectors().col(q).dot(out));
            acc += (clc_e[j](idx) - ds.clc_responses[j](idx)) * e;
            ++idx;
          }
        }
        break;
    }
    return acc;
  };

  RealVector grad = RealVector::Zero(circuit.num_params());
  RealVector theta = circuit.theta;
  for (int i = 0; i < m; ++i) {
    const Gate& g = circuit.gates[i];
    const int np = g.num_params();
    for (int s = 0; s < np; ++s) {
      const int slot = g.param_slots[s];
      Real diff = 0;
      for (const Real shift : {kHalfPi, -kHalfPi}) {
        theta(slot) = circuit.theta(slot) + shift;
        const Matrix Vpm = suffix[i + 1] * gate_matrix(g, theta, circuit.n) * prefix[i];
        diff += (shift > 0 ? 1.0 : -1.0) * shifted_term(Vpm);
      }
      theta(slot) = circuit.theta(slot);
      // dE/dtheta = (E+ - E-)/2; fidelity losses carry -1/N, the CLC chain
      // rule carries 2/N against the residual weights already in the term.
      if (protocol == Protocol::CLC)
        grad(slot) = diff / N;
      else
        grad(slot) = -diff / (2.0 * N);
    }
  }
  return grad;
}

}  // namespace qdl
