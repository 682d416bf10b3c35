/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qdl/circuit.hpp"

#include <cmath>
#include <numbers>

#include "qdl/errors.hpp"
#include "qdl/linalg.hpp"

namespace qdl {

Matrix rx_matrix(Real t) {
  Matrix m(2, 2);
  const Real c = std::cos(t / 2), s = std::sin(t / 2);
  m << Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0);
  return m;
}

Matrix ry_matrix(Real t) {
  Matrix m(2, 2);
  const Real c = std::cos(t / 2), s = std::sin(t / 2);
  m << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
  return m;
}

Matrix rz_matrix(Real t) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -t / 2);
  m(1, 1) = std::polar(1.0, t / 2);
  return m;
}

Matrix rot_matrix(Real t1, Real t2, Real t3) {
  return rz_matrix(t3) * ry_matrix(t2) * rz_matrix(t1);
}

namespace {

Matrix single_qubit_matrix(const Gate& g, const RealVector& theta) {
  switch (g.kind) {
    case GateKind::RX: return rx_matrix(theta(g.param_slots[0]));
    case GateKind::RY: return ry_matrix(theta(g.param_slots[0]));
    case GateKind::RZ: return rz_matrix(theta(g.param_slots[0]));
    case GateKind::ROT:
      return rot_matrix(theta(g.param_slots[0]), theta(g.param_slots[1]),
                        theta(g.param_slots[2]));
    case GateKind::PAULI_X: return pauli_x();
    case GateKind::PAULI_Y: return pauli_y();
    case GateKind::PAULI_Z: return pauli_z();
    default: throw DomainError("single_qubit_matrix: CNOT is not single-qubit");
  }
}

// Applies a 2x2 gate to the target qubit in place. Qubit 0 is the most
// significant bit of the basis index.
void apply_single(State& psi, const Matrix& u, int target, int n) {
  const int stride = 1 << (n - 1 - target);
  const int d = static_cast<int>(psi.size());
  for (int base = 0; base < d; base += 2 * stride) {
    for (int i = base; i < base + stride; ++i) {
      const Complex a = psi(i);
      const Complex b = psi(i + stride);
      psi(i) = u(0, 0) * a + u(0, 1) * b;
      psi(i + stride) = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

void apply_cnot(State& psi, int control, int target, int n) {
  const int cbit = 1 << (n - 1 - control);
  const int tbit = 1 << (n - 1 - target);
  const int d = static_cast<int>(psi.size());
  for (int i = 0; i < d; ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(psi(i), psi(i | tbit));
  }
}

}  // namespace

Matrix gate_matrix(const Gate& g, const RealVector& theta, int n) {
  const int d = 1 << n;
  if (g.kind == GateKind::CNOT) {
    Matrix m = Matrix::Zero(d, d);
    const int cbit = 1 << (n - 1 - g.control);
    const int tbit = 1 << (n - 1 - g.target);
    for (int i = 0; i < d; ++i) m((i & cbit) ? (i ^ tbit) : i, i) = 1.0;
    return m;
  }
  Matrix u = single_qubit_matrix(g, theta);
  Matrix m = Matrix::Identity(1, 1);
  for (int q = 0; q < n; ++q)
    m = kron(m, q == g.target ? u : Matrix::Identity(2, 2));
  return m;
}

State apply(const ParamCircuit& circuit, const State& input) {
  if (input.size() != circuit.dim())
    throw ShapeError("apply: state dimension does not match circuit");
  State psi = input;
  for (const Gate& g : circuit.gates) {
    if (g.kind == GateKind::CNOT)
      apply_cnot(psi, g.control, g.target, circuit.n);
    else
      apply_single(psi, single_qubit_matrix(g, circuit.theta), g.target, circuit.n);
  }
  return psi;
}

ParamCircuit build_hea(int n, int layers, SeededRng& rng) {
  if (n < 1 || layers < 1) throw DomainError("build_hea: need n >= 1 and layers >= 1");
  ParamCircuit c;
  c.n = n;
  c.layers = layers;
  c.theta.resize(3 * n * layers);
  int slot = 0;
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < n; ++q) {
      Gate g;
      g.kind = GateKind::ROT;
      g.target = q;
      g.param_slots = {slot, slot + 1, slot + 2};
      slot += 3;
      c.gates.push_back(g);
    }
    for (int q = 0; q + 1 < n; ++q) {
      Gate g;
      g.kind = GateKind::CNOT;
      g.control = q;
      g.target = q + 1;
      c.gates.push_back(g);
    }
  }
  for (Eigen::Index i = 0; i < c.theta.size(); ++i)
    c.theta(i) = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return c;
}

Matrix as_matrix(const ParamCircuit& circuit) {
  if (circuit.n > 6) throw CapacityError("as_matrix: n > 6 exceeds the dense envelope");
  const int d = circuit.dim();
  Matrix m(d, d);
  for (int j = 0; j < d; ++j) {
    State e = State::Zero(d);
    e(j) = 1.0;
    m.col(j) = qdl::apply(circuit, e);
  }
  return m;
}

Real expectation(const ParamCircuit& circuit, const State& input, const Observable& obs) {
  if (obs.dim() != circuit.dim())
    throw ShapeError("expectation: observable dimension does not match circuit");
  const State out = qdl::apply(circuit, input);
  const Complex val = out.dot(obs.matrix() * out);
  return val.real();
}

}  // namespace qdl
