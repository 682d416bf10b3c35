/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "qdl/errors.hpp"
#include "qdl/haar.hpp"
#include "qdl/linalg.hpp"
#include "qdl/observables.hpp"

using namespace qdl;

namespace {

Matrix random_hermitian(int d, SeededRng& rng) {
  Matrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  return (g + g.adjoint()) / 2.0;
}

Matrix reconstruct(const Observable& o) {
  Matrix m = Matrix::Zero(o.dim(), o.dim());
  for (int q = 0; q < o.dim(); ++q) {
    const State v = o.eigenvectors().col(q);
    m += o.eigenvalues()(q) * (v * v.adjoint());
  }
  return m;
}

}  // namespace

TEST_CASE("from_matrix on Z gives the computational projectors") {
  const Observable o = Observable::from_matrix(pauli_z());
  CHECK(o.rank() == 2);
  CHECK(o.eigenvalues()(0) == doctest::Approx(-1.0));
  CHECK(o.eigenvalues()(1) == doctest::Approx(1.0));
  // the +1 eigenprojector is |0><0|, the -1 one is |1><1|
  const State vminus = o.eigenvectors().col(0);
  const State vplus = o.eigenvectors().col(1);
  CHECK(std::norm(vplus(0)) == doctest::Approx(1.0));
  CHECK(std::norm(vminus(1)) == doctest::Approx(1.0));
}

TEST_CASE("from_matrix on the identity") {
  const Observable o = Observable::from_matrix(Matrix::Identity(4, 4));
  CHECK(o.rank() == 4);
  for (int q = 0; q < 4; ++q) CHECK(o.eigenvalues()(q) == doctest::Approx(1.0));
}

TEST_CASE("spectral reconstruction of random Hermitian matrices") {
  SeededRng rng(8);
  const Matrix m = random_hermitian(8, rng);
  const Observable o = Observable::from_matrix(m);
  CHECK(max_abs_diff(reconstruct(o), o.matrix()) < 1e-9);
  CHECK(is_unitary(o.eigenvectors(), 1e-10));
}

TEST_CASE("from_matrix rejects non-Hermitian input") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(1, 0);
  CHECK_THROWS_AS(Observable::from_matrix(m), DomainError);
  CHECK_THROWS_AS(Observable::from_matrix(Matrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("projector_zero") {
  const Observable p1 = projector_zero(1);
  CHECK(p1.matrix()(0, 0) == Complex(1, 0));
  CHECK(p1.matrix()(1, 1) == Complex(0, 0));
  CHECK(p1.rank() == 1);

  const Observable p2 = projector_zero(2);
  CHECK(p2.matrix()(0, 0) == Complex(1, 0));
  for (int i = 1; i < 4; ++i) CHECK(std::abs(p2.matrix()(i, i)) == 0.0);

  // d Tr(O^2) - Tr(O)^2 = 2^n - 1 for the rank-1 projector
  for (int n = 1; n <= 4; ++n)
    CHECK(bound_prefactor(projector_zero(n)) == doctest::Approx((1 << n) - 1.0));
}

TEST_CASE("k_diagonal structure and off-diagonal sums") {
  const Observable diag = k_diagonal(16, 5, 0);
  for (int i = 0; i < 16; ++i)
    CHECK(diag.matrix()(i, i) == Complex(i < 5 ? 1.0 : 0.0, 0));
  CHECK(offdiag_square_sum(diag) == doctest::Approx(0.0));

  CHECK(offdiag_square_sum(k_diagonal(16, 5, 1)) == doctest::Approx(8.0));
  CHECK(offdiag_square_sum(k_diagonal(16, 5, 2)) == doctest::Approx(14.0));

  const Observable full = k_diagonal(16, 5, 4);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(full.matrix()(i, j) == Complex(1, 0));

  CHECK_THROWS_AS(k_diagonal(4, 5, 0), DomainError);
  CHECK_THROWS_AS(k_diagonal(16, 5, 5), DomainError);
}

TEST_CASE("offdiag_square_sum on X") {
  CHECK(offdiag_square_sum(Observable::from_matrix(pauli_x())) == doctest::Approx(2.0));
}

TEST_CASE("bound prefactor is nonnegative for random observables") {
  SeededRng rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const Observable o = Observable::from_matrix(random_hermitian(4, rng));
    CHECK(bound_prefactor(o) >= -1e-9);
  }
}

TEST_CASE("full-rank eigenprojectors resolve the identity") {
  SeededRng rng(13);
  Matrix g = random_hermitian(8, rng);
  g += 20.0 * Matrix::Identity(8, 8);  // push all eigenvalues away from zero
  const Observable o = Observable::from_matrix(g);
  REQUIRE(o.rank() == 8);
  Matrix sum = Matrix::Zero(8, 8);
  for (int q : o.support()) {
    const State v = o.eigenvectors().col(q);
    sum += v * v.adjoint();
  }
  CHECK(max_abs_diff(sum, Matrix::Identity(8, 8)) < 1e-9);
}

TEST_CASE("observable spec parsing") {
  CHECK(max_abs_diff(parse_observable("proj0", 2).matrix(),
                     projector_zero(2).matrix()) == doctest::Approx(0.0));

  const Matrix zi = kron(pauli_z(), Matrix::Identity(2, 2));
  CHECK(max_abs_diff(parse_observable("pauli:ZI", 2).matrix(), zi) ==
        doctest::Approx(0.0));
  CHECK(max_abs_diff(parse_observable("pauli:Z⊗I", 2).matrix(), zi) ==
        doctest::Approx(0.0));

  CHECK(max_abs_diff(parse_observable("kdiag:r=3,k=1", 2).matrix(),
                     k_diagonal(4, 3, 1).matrix()) == doctest::Approx(0.0));

  CHECK_THROWS_AS(parse_observable("pauli:ZX", 3), DomainError);
  CHECK_THROWS_AS(parse_observable("wat", 2), DomainError);
}

TEST_CASE("matrix file round trip") {
  SeededRng rng(14);
  const Matrix m = random_hermitian(4, rng);
  const std::string path = "test_observable_roundtrip.txt";
  save_matrix(path, m);
  const Matrix back = load_matrix(path);
  CHECK(max_abs_diff(m, back) == doctest::Approx(0.0));
  const Observable o = parse_observable("file:" + path, 2);
  CHECK(max_abs_diff(o.matrix(), m) < 1e-15);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_matrix("no_such_file.txt"), DomainError);
}
