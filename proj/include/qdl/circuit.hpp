/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QDL_CIRCUIT_HPP
#define QDL_CIRCUIT_HPP

#include <array>
#include <vector>

#include "qdl/observables.hpp"
#include "qdl/rng.hpp"
#include "qdl/types.hpp"

namespace qdl {

/// Gate set of the ansatz. ROT is the general single-qubit rotation
/// RZ(t3) * RY(t2) * RZ(t1), i.e. the RZ(t1) factor acts first.
enum class GateKind { RX, RY, RZ, ROT, CNOT, PAULI_X, PAULI_Y, PAULI_Z };

struct Gate {
  GateKind kind;
  int target = 0;
  int control = -1;                     // defined iff kind == CNOT
  std::array<int, 3> param_slots{-1, -1, -1};

  int num_params() const {
    switch (kind) {
      case GateKind::ROT: return 3;
      case GateKind::RX:
      case GateKind::RY:
      case GateKind::RZ: return 1;
      default: return 0;
    }
  }
};

/// Layered parameterized circuit V(theta) on n qubits. Qubit 0 is the most
/// significant bit of the basis index. Gates apply in list order. Immutable
/// during evaluation; trainers clone theta per run.
struct ParamCircuit {
  int n = 1;
  int layers = 0;
  std::vector<Gate> gates;
  RealVector theta;

  int dim() const { return 1 << n; }
  int num_params() const { return static_cast<int>(theta.size()); }
};

Matrix rx_matrix(Real t);
Matrix ry_matrix(Real t);
Matrix rz_matrix(Real t);
Matrix rot_matrix(Real t1, Real t2, Real t3);

/// d x d embedding of a single gate (theta taken from the circuit's slots).
Matrix gate_matrix(const Gate& g, const RealVector& theta, int n);

/// V(theta) |input>. Throws ShapeError when input.dim != 2^n.
State apply(const ParamCircuit& circuit, const State& input);

/// Hardware-efficient ansatz: per layer one ROT per qubit followed by the
/// CNOT chain q -> q+1, 3*n*layers parameters, theta initialized uniformly
/// in [0, 2*pi).
ParamCircuit build_hea(int n, int layers, SeededRng& rng);

/// Dense unitary of the whole circuit (columns = apply on basis states).
/// Throws CapacityError for n > 6.
Matrix as_matrix(const ParamCircuit& circuit);

/// Tr(O V |psi><psi| V†), real up to 1e-10 imaginary residue.
Real expectation(const ParamCircuit& circuit, const State& input, const Observable& obs);

}  // namespace qdl

#endif
