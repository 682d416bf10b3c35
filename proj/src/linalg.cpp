/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qdl/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

#include "qdl/errors.hpp"

namespace qdl {

Complex trace(const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("trace: matrix is not square");
  return a.trace();
}

bool is_unitary(const Matrix& a, Real tol) {
  if (a.rows() != a.cols()) throw ShapeError("is_unitary: matrix is not square");
  Matrix g = a.adjoint() * a;
  g.diagonal().array() -= Complex(1.0, 0.0);
  return g.cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const Matrix& a, Real tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Real max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

bool is_normalized(const State& psi, Real tol) {
  return std::abs(psi.squaredNorm() - 1.0) <= tol;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

int numerical_rank(const Matrix& m, Real rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const Real cutoff = rel_tol * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

namespace {

// Thin Householder QR with the R diagonal rotated to be real positive, so
// that column j of Q lies along the j-th orthogonalized input. With unit-norm
// inputs this makes Q.col(0) equal to the first input exactly.
Matrix phase_fixed_thin_q(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
  Matrix r = q.adjoint() * m;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const Complex rjj = r(j, j);
    const Real mag = std::abs(rjj);
    if (mag > 0) q.col(j) *= rjj / mag;
  }
  return q;
}

}  // namespace

Matrix qr_unitary_extend(const std::vector<State>& states, SeededRng& rng) {
  if (states.empty()) throw DomainError("qr_unitary_extend: no input states");
  const int d = static_cast<int>(states.front().size());
  const int N = static_cast<int>(states.size());
  if (N > d) throw DomainError("qr_unitary_extend: more states than dimensions");

  Matrix m(d, N);
  for (int j = 0; j < N; ++j) {
    if (states[j].size() != d)
      throw ShapeError("qr_unitary_extend: inconsistent state dimensions");
    m.col(j) = states[j];
  }

  const int rank = numerical_rank(m);
  if (rank < N)
    throw DependenceError("qr_unitary_extend: states are linearly dependent", rank);

  Matrix q = phase_fixed_thin_q(m);
  if (N == d) return q;

  // Haar-uniform completion: Ginibre columns projected onto the orthogonal
  // complement, then orthonormalized.
  Matrix g(d, d - N);
  for (int j = 0; j < d - N; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  g -= q * (q.adjoint() * g);
  Matrix qc = phase_fixed_thin_q(g);

  Matrix out(d, d);
  out.leftCols(N) = q;
  out.rightCols(d - N) = qc;
  return out;
}

}  // namespace qdl
