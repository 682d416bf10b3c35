/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QDL_PROTOCOLS_HPP
#define QDL_PROTOCOLS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qdl/circuit.hpp"
#include "qdl/observables.hpp"
#include "qdl/rng.hpp"
#include "qdl/types.hpp"

namespace qdl {

/// The three learning protocols: classical (measured responses), restricted
/// quantum (access to U), quantum (access to U†).
enum class Protocol { CLC, REQU, QU };

const char* to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

enum class FamilyKind { HAAR, ORTHOGONAL_HAAR };

const char* to_string(FamilyKind k);
FamilyKind family_from_string(const std::string& s);

/// Input-state distribution: N i.i.d. Haar states, or N distinct columns of
/// a single Haar unitary (pairwise orthogonal). The orthogonal family
/// requires N <= 2^n.
struct StateFamily {
  FamilyKind kind = FamilyKind::HAAR;
  int n = 1;
  int N = 1;
};

std::vector<State> gen_states(const StateFamily& family, SeededRng& rng);

/// Training data for one protocol. CLC responses are the r projector
/// expectations a_j; REQU responses are U|psi_j>; QU responses are U†|psi_j>.
struct Dataset {
  Protocol protocol = Protocol::CLC;
  int n = 1;
  std::vector<State> states;
  std::vector<RealVector> clc_responses;   // CLC only
  std::vector<State> state_responses;      // REQU / QU

  int size() const { return static_cast<int>(states.size()); }
  int dim() const { return 1 << n; }
};

/// Builds the dataset exactly from U (CLC: a_jq = |<o_q|U|psi_j>|^2).
/// The observable is required only for CLC; passing none there throws
/// DomainError. Throws ShapeError on dimension mismatch.
Dataset gen_dataset(Protocol protocol, const Matrix& U,
                    const std::vector<State>& states,
                    const Observable* observable = nullptr);

/// CLC loss: (1/N) sum_q sum_j (<o_q-projection of V psi_j> - a_jq)^2.
Real loss_clc(const ParamCircuit& circuit, const Dataset& dataset, const Observable& obs);

/// ReQu loss: 1 - (1/N) sum_j |<resp_j | V psi_j>|^2.
Real loss_requ(const ParamCircuit& circuit, const Dataset& dataset);

/// Qu loss: 1 - (1/N) sum_j |<psi_j | V resp_j>|^2 with resp_j = U†|psi_j>.
Real loss_qu(const ParamCircuit& circuit, const Dataset& dataset);

Real loss_value(Protocol protocol, const ParamCircuit& circuit,
                const Dataset& dataset, const Observable* obs);

/// Matrix-level loss evaluation (V given as a dense unitary).
Real loss_value(Protocol protocol, const Matrix& V, const Dataset& dataset,
                const Observable* obs);

/// Inter-state relative phases of a perfectly trained hypothesis, mod 2*pi.
/// aligned <=> max pairwise circular distance <= alignment tolerance.
struct PhaseVector {
  RealVector values;
  bool aligned = false;
  Real spread = 0.0;
};

/// Extracts the per-state phases relating U and V outputs: REQU uses
/// arg<psi_j|V†U|psi_j>, QU uses arg<psi_j|V U†|psi_j>. Throws
/// NotPerfectlyTrainedError (carrying the max residual) when any per-state
/// residual exceeds residual_tol. aligned_tol defaults to the trained-circuit
/// tolerance; oracle-built hypotheses warrant 1e-9.
PhaseVector extract_phases(Protocol protocol, const Matrix& U, const Matrix& V,
                           const std::vector<State>& states,
                           Real residual_tol = 1e-6, Real aligned_tol = 1e-3);

/// Max pairwise circular distance of a phase list (radians).
Real circular_spread(const RealVector& phases);

/// Perfectly trained ReQu hypothesis with prescribed phases:
/// V = U * W, W = B * blockdiag(diag(e^{-i a_j}), Y) * B†, where B extends
/// the states to a unitary basis and Y is Haar on the complement. For
/// non-orthogonal states the phases must be constant (no unitary exists
/// otherwise; throws InfeasiblePhaseError).
Matrix oracle_requ(const Matrix& U, const std::vector<State>& states,
                   const RealVector& alpha, SeededRng& rng);

/// Perfectly trained Qu hypothesis: V = W† * U with the same W construction.
Matrix oracle_qu(const Matrix& U, const std::vector<State>& states,
                 const RealVector& beta, SeededRng& rng);

/// Eigenbasis-phase CLC solution family: V = D(gamma) * U with
/// D = sum_q e^{i gamma_q} |o_q><o_q|, gamma i.i.d. uniform. Has zero CLC
/// loss on any dataset generated from U.
Matrix oracle_clc(const Matrix& U, const Observable& obs, SeededRng& rng);

/// Plain-text dataset serialization for cross-implementation comparison.
void save_dataset(std::ostream& out, const Dataset& d);
Dataset load_dataset(std::istream& in);
void save_dataset(const std::string& path, const Dataset& d);
Dataset load_dataset(const std::string& path);

}  // namespace qdl

#endif
