/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QDL_RISK_HPP
#define QDL_RISK_HPP

#include <functional>
#include <optional>

#include "qdl/observables.hpp"
#include "qdl/optimizer.hpp"
#include "qdl/protocols.hpp"
#include "qdl/rng.hpp"

namespace qdl {

/// Exact Haar-input-averaged risk of hypothesis V against target U:
///   risk = 2/(d(d+1)) * (Tr(O^2) - Tr(U†OU V†OV)).
struct RiskReport {
  Real risk = 0.0;
  Real trace_term = 0.0;  // Tr(U†OU V†OV)
  int d = 0;
  Real normalized_risk = 0.0;  // risk * d^2
};

RiskReport analytical_risk(const Matrix& U, const Matrix& V, const Observable& obs);

/// Brute-force risk oracle: Monte Carlo average of (f_U(psi) - h(psi))^2
/// over Haar input states. Independent of the closed form above.
Real mc_risk_oracle(const Matrix& U, const Matrix& V, const Observable& obs,
                    long samples, SeededRng& rng);

struct McRiskStats {
  Real mean = 0.0;
  Real standard_error = 0.0;
  long samples = 0;
};

McRiskStats mc_risk_oracle_stats(const Matrix& U, const Matrix& V,
                                 const Observable& obs, long samples,
                                 SeededRng& rng);

/// Whether a lower bound assumes linearly independent states or covers the
/// (possibly dependent) general case.
enum class Independence { INDEPENDENT, DEPENDENT };

struct BoundValue {
  Protocol protocol = Protocol::CLC;
  int d = 0;
  int N = 0;
  bool aligned = false;
  Independence independence = Independence::INDEPENDENT;
  Real value = 0.0;
};

/// Classical-protocol lower bound on the averaged risk.
///   INDEPENDENT: 2 max(d^2-N-1, 0) (d Tr(O^2) - Tr(O)^2) / (d^2 (d+1) (d^2-1))
///   DEPENDENT:   2 (d^2 - min(N, d^2)) (d Tr(O^2) - Tr(O)^2) / (d^2 (d+1) (d^2-1))
BoundValue nfl_bound_clc(int d, int N, const Observable& obs,
                         Independence mode = Independence::INDEPENDENT);

/// Restricted-quantum lower bound. INDEPENDENT mode:
///   aligned:     2 max(d^2-N^2-1, 0) (d Tr(O^2) - Tr(O)^2) / (d^4 (d+1))
///   not aligned: 2 max(d^2-N-1, 0)  (d Tr(O^2) - Tr(O)^2) / (d^4 (d+1))
/// DEPENDENT mode: (d^2 - min(N, d^2)) (d Tr(O^2) - Tr(O)^2) / (d^2 (d+1) (d^2-1)).
BoundValue nfl_bound_requ(int d, int N, const Observable& obs, bool aligned,
                          Independence mode = Independence::INDEPENDENT);

/// Quantum-protocol (inverse-access) lower bound, with effective size
/// min(N, d):
///   [ (d-N)(d Tr(O^2) - Tr(O)^2) + (N^2-N) sum_{k!=j} O_kj^2 1(not aligned) ]
///   / (d^3 (d+1)).
BoundValue nfl_bound_qu(int d, int N, const Observable& obs, bool aligned);

enum class HypothesisSource { TRAINED, ORACLE };

const char* to_string(HypothesisSource s);
HypothesisSource source_from_string(const std::string& s);

struct AveragedRiskEstimate {
  Real mean = 0.0;
  Real standard_error = 0.0;
  long trials = 0;             // trials included in the mean
  Real perfect_training_rate = 0.0;
  long trials_total = 0;
};

struct McAverageOptions {
  int layers = 20;
  AdamConfig adam;
  int restarts = 5;
  int threads = 1;
  Real oracle_residual_tol = 1e-10;
};

/// Monte Carlo estimate of the (U, dataset)-averaged risk. Each trial draws
/// U Haar and states from the family with a derived per-trial rng, builds a
/// hypothesis (trained to the perfect-training tolerance with restarts, or
/// oracle-constructed: i.i.d. uniform phases for orthogonal states, one
/// common uniform phase for non-orthogonal states), and evaluates the
/// analytical risk. Trials that miss perfect training are excluded from the
/// mean and counted. Aggregation is Kahan-compensated in trial order, so the
/// result does not depend on the worker count.
///
/// Throws DomainError for ORACLE with CLC unless allow_clc_oracle (the CLC
/// oracle covers only the eigenbasis-phase family), and EstimationError when
/// no trial succeeds.
AveragedRiskEstimate mc_average_risk(Protocol protocol, int n, int N,
                                     FamilyKind family, const Observable& obs,
                                     HypothesisSource source, long trials,
                                     const SeededRng& master,
                                     const McAverageOptions& options = {},
                                     bool allow_clc_oracle = false);

}  // namespace qdl

#endif
