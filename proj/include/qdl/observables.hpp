/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QDL_OBSERVABLES_HPP
#define QDL_OBSERVABLES_HPP

#include <string>
#include <vector>

#include "qdl/types.hpp"

namespace qdl {

/// Hermitian observable with cached spectral decomposition. Eigenvalues are
/// ascending; eigenvector columns are orthonormal. rank counts eigenvalues
/// with |o_q| > 1e-10, and the CLC protocol measures exactly those r
/// eigenprojectors. Immutable after construction.
class Observable {
 public:
  /// Spectral-decomposes m. Throws DomainError if m is not Hermitian within
  /// tol, ShapeError if not square.
  static Observable from_matrix(const Matrix& m, Real tol = 1e-10);

  const Matrix& matrix() const { return matrix_; }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  int rank() const { return rank_; }

  /// Indices of the eigenvalues with |o_q| > 1e-10, i.e. the projectors the
  /// CLC response vector ranges over (in cached order).
  const std::vector<int>& support() const { return support_; }

  Real trace() const;
  Real trace_sq() const;  // Tr(O^2)

 private:
  Observable() = default;
  Matrix matrix_;
  RealVector eigenvalues_;
  Matrix eigenvectors_;
  std::vector<int> support_;
  int rank_ = 0;
};

/// Rank-1 projector onto |0...0> for n qubits.
Observable projector_zero(int n);

/// Banded block observable: entries O[i][j] = 1 for i,j < r with |i-j| <= k,
/// zero elsewhere. Throws DomainError unless k < r <= d.
Observable k_diagonal(int d, int r, int k);

/// Sum of |O_kj|^2 over off-diagonal entries in the computational basis.
Real offdiag_square_sum(const Observable& o);

/// d*Tr(O^2) - Tr(O)^2, the (nonnegative) prefactor shared by all bounds.
Real bound_prefactor(const Observable& o);

/// Parses an observable spec string: "proj0" (needs n), "pauli:Z⊗I" (also
/// accepts "pauli:ZI"), "kdiag:r=5,k=2" (needs n), "file:<path>".
Observable parse_observable(const std::string& spec, int n);

/// Dense matrix text format: first line "d", then d rows of d "re,im" pairs.
Matrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const Matrix& m);

}  // namespace qdl

#endif
