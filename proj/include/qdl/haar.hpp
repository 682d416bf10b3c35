/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QDL_HAAR_HPP
#define QDL_HAAR_HPP

#include <string>
#include <vector>

#include "qdl/rng.hpp"
#include "qdl/types.hpp"

namespace qdl {

/// Haar-random d x d unitary via complex Ginibre + QR, with the Q columns
/// multiplied by the phases of diag(R) to remove the QR gauge ambiguity.
Matrix haar_unitary(int d, SeededRng& rng);

/// Haar-random pure state: normalized complex Gaussian vector.
State haar_state(int d, SeededRng& rng);

/// Second-moment identities over the unitary group / state space that the
/// Monte Carlo harness verifies:
///   P1: E_W Tr(W A W† B)                    = Tr(A) Tr(B) / d
///   P2: E_W Tr(W A W† B W C W† D)           (2-design, single trace)
///   P3: E_W Tr(W A W† B) Tr(W C W† D)       (2-design, product of traces)
///   P4: E_psi Tr(|psi><psi| A)              = Tr(A) / d
///   P5: E_psi Tr(|psi><psi| A)^2            = (Tr(A)^2 + Tr(A^2)) / (d(d+1))
enum class MomentProperty { P1, P2, P3, P4, P5 };

const char* to_string(MomentProperty p);

struct MomentCheckReport {
  MomentProperty property;
  int d = 0;
  Complex estimate;
  Complex analytic;
  Real standard_error = 0.0;  // componentwise-combined
  Real z_score = 0.0;
  long samples = 0;
};

/// Closed-form right-hand side of the chosen identity.
Complex moment_analytic(MomentProperty p, int d, const std::vector<Matrix>& operands);

/// Monte Carlo estimate of the left-hand side against the analytic value.
/// Operand arity: P1 takes {A,B}; P2 and P3 take {A,B,C,D}; P4 and P5 take
/// {A}. Throws DomainError on arity mismatch or samples < 1.
MomentCheckReport moment_check(MomentProperty p, int d,
                               const std::vector<Matrix>& operands,
                               long samples, SeededRng& rng);

}  // namespace qdl

#endif
