/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qdl/observables.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>
#include <sstream>

#include "qdl/errors.hpp"
#include "qdl/linalg.hpp"

namespace qdl {

namespace {
constexpr Real kRankTol = 1e-10;
}

Observable Observable::from_matrix(const Matrix& m, Real tol) {
  if (m.rows() != m.cols()) throw ShapeError("Observable: matrix is not square");
  if (!is_hermitian(m, tol)) throw DomainError("Observable: matrix is not Hermitian");

  Observable o;
  o.matrix_ = (m + m.adjoint()) / 2.0;  // symmetrize roundoff
  Eigen::SelfAdjointEigenSolver<Matrix> solver(o.matrix_);
  if (solver.info() != Eigen::Success)
    throw DomainError("Observable: eigendecomposition failed");
  o.eigenvalues_ = solver.eigenvalues();
  o.eigenvectors_ = solver.eigenvectors();
  for (Eigen::Index q = 0; q < o.eigenvalues_.size(); ++q)
    if (std::abs(o.eigenvalues_(q)) > kRankTol) o.support_.push_back(static_cast<int>(q));
  o.rank_ = static_cast<int>(o.support_.size());
  return o;
}

Real Observable::trace() const { return eigenvalues_.sum(); }

Real Observable::trace_sq() const { return eigenvalues_.squaredNorm(); }

Observable projector_zero(int n) {
  if (n < 1) throw DomainError("projector_zero: n must be >= 1");
  const int d = 1 << n;
  Matrix m = Matrix::Zero(d, d);
  m(0, 0) = 1.0;
  return Observable::from_matrix(m);
}

Observable k_diagonal(int d, int r, int k) {
  if (r > d) throw DomainError("k_diagonal: block size exceeds dimension");
  if (r < 1 || k < 0 || k >= r) throw DomainError("k_diagonal: need 0 <= k < r");
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (std::abs(i - j) <= k) m(i, j) = 1.0;
  return Observable::from_matrix(m);
}

Real offdiag_square_sum(const Observable& o) {
  const Matrix& m = o.matrix();
  Real sum = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) sum += std::norm(m(i, j));
  return sum;
}

Real bound_prefactor(const Observable& o) {
  const Real t = o.trace();
  return o.dim() * o.trace_sq() - t * t;
}

namespace {

Matrix pauli_by_char(char c) {
  switch (c) {
    case 'I': return Matrix::Identity(2, 2);
    case 'X': return pauli_x();
    case 'Y': return pauli_y();
    case 'Z': return pauli_z();
    default: throw DomainError(std::string("unknown Pauli factor '") + c + "'");
  }
}

Observable parse_pauli_string(const std::string& factors, int n) {
  std::string letters;
  for (std::size_t i = 0; i < factors.size();) {
    // skip a UTF-8 "⊗" separator if present
    if ((unsigned char)factors[i] == 0xE2 && i + 2 < factors.size()) {
      i += 3;
      continue;
    }
    if (factors[i] == '*' || factors[i] == 'x' || factors[i] == ' ') {
      ++i;
      continue;
    }
    letters.push_back(factors[i]);
    ++i;
  }
  if (letters.empty()) throw DomainError("pauli spec has no factors");
  if (n > 0 && static_cast<int>(letters.size()) != n)
    throw DomainError("pauli spec length does not match qubit count");
  Matrix m = pauli_by_char(letters[0]);
  for (std::size_t i = 1; i < letters.size(); ++i) m = kron(m, pauli_by_char(letters[i]));
  return Observable::from_matrix(m);
}

}  // namespace

Observable parse_observable(const std::string& spec, int n) {
  if (spec == "proj0") return projector_zero(n);
  if (spec.rfind("pauli:", 0) == 0) return parse_pauli_string(spec.substr(6), n);
  if (spec.rfind("kdiag:", 0) == 0) {
    int r = -1, k = -1;
    std::stringstream ss(spec.substr(6));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw DomainError("kdiag spec: expected r=..,k=..");
      const std::string key = tok.substr(0, eq);
      const int val = std::stoi(tok.substr(eq + 1));
      if (key == "r") r = val;
      else if (key == "k") k = val;
      else throw DomainError("kdiag spec: unknown key '" + key + "'");
    }
    if (r < 0 || k < 0) throw DomainError("kdiag spec: missing r or k");
    return k_diagonal(1 << n, r, k);
  }
  if (spec.rfind("file:", 0) == 0) return Observable::from_matrix(load_matrix(spec.substr(5)));
  throw DomainError("unknown observable spec '" + spec + "'");
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open matrix file '" + path + "'");
  int d = 0;
  in >> d;
  if (!in || d < 1 || d > kMaxDim) throw DomainError("bad matrix dimension in '" + path + "'");
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      std::string pair;
      in >> pair;
      const auto comma = pair.find(',');
      if (!in || comma == std::string::npos)
        throw DomainError("bad matrix entry in '" + path + "'");
      m(i, j) = Complex(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
    }
  }
  return m;
}

void save_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write matrix file '" + path + "'");
  out.precision(17);
  out << m.rows() << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << " ";
      out << m(i, j).real() << "," << m(i, j).imag();
    }
    out << "\n";
  }
}

}  // namespace qdl
