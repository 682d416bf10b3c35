/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QDL_LINALG_HPP
#define QDL_LINALG_HPP

#include <vector>

#include "qdl/rng.hpp"
#include "qdl/types.hpp"

namespace qdl {

/// Hermitian conjugate.
inline Matrix adjoint(const Matrix& a) { return a.adjoint(); }

Complex trace(const Matrix& a);

/// Max-norm test of a†a = I. Throws ShapeError on non-square input.
bool is_unitary(const Matrix& a, Real tol);

/// Max-norm test of a = a†.
bool is_hermitian(const Matrix& a, Real tol);

/// Largest absolute entry of a - b.
Real max_abs_diff(const Matrix& a, const Matrix& b);

bool is_normalized(const State& psi, Real tol = 1e-12);

/// Kronecker product (first factor is the most significant subsystem).
Matrix kron(const Matrix& a, const Matrix& b);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

/// Numerical rank of the column set at relative singular-value threshold
/// sigma > rel_tol * sigma_max.
int numerical_rank(const Matrix& m, Real rel_tol = 1e-9);

/// Extends N linearly independent states to a d x d unitary basis. The first
/// N columns are the QR orthonormalization of the inputs (column 1 equals
/// state 1, and the leading k columns span the same flag as the first k
/// inputs); the remaining d - N columns are a Haar-uniform orthonormal
/// completion of the orthogonal complement.
///
/// Throws DependenceError (carrying the numerical rank) when the inputs are
/// rank deficient.
Matrix qr_unitary_extend(const std::vector<State>& states, SeededRng& rng);

}  // namespace qdl

#endif
