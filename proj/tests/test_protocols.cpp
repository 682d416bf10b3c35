/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "qdl/errors.hpp"
#include "qdl/haar.hpp"
#include "qdl/linalg.hpp"
#include "qdl/protocols.hpp"

using namespace qdl;

namespace {

constexpr Real kPi = std::numbers::pi;

State basis_state(int d, int idx) {
  State s = State::Zero(d);
  s(idx) = 1;
  return s;
}

ParamCircuit rx_circuit(Real angle) {
  ParamCircuit c;
  c.n = 1;
  Gate g;
  g.kind = GateKind::RX;
  g.target = 0;
  g.param_slots = {0, -1, -1};
  c.gates.push_back(g);
  c.theta = RealVector(1);
  c.theta << angle;
  return c;
}

ParamCircuit identity_circuit(int n) {
  ParamCircuit c;
  c.n = n;
  c.theta = RealVector();
  return c;
}

}  // namespace

TEST_CASE("gen_states: orthogonal family has identity Gram matrix") {
  SeededRng rng(1);
  const auto states = gen_states({FamilyKind::ORTHOGONAL_HAAR, 2, 4}, rng);
  REQUIRE(states.size() == 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Complex g = states[i].dot(states[j]);
      CHECK(std::abs(g - (i == j ? Complex(1, 0) : Complex(0, 0))) < 1e-10);
    }
}

TEST_CASE("gen_states: Haar pairs are neither orthogonal nor parallel") {
  SeededRng rng(2);
  const auto states = gen_states({FamilyKind::HAAR, 3, 2}, rng);
  const Real overlap = std::abs(states[0].dot(states[1]));
  CHECK(overlap > 0.0);
  CHECK(overlap < 1.0);
}

TEST_CASE("gen_states: determinism and domain guard") {
  SeededRng a(5), b(5);
  const auto sa = gen_states({FamilyKind::ORTHOGONAL_HAAR, 1, 2}, a);
  const auto sb = gen_states({FamilyKind::ORTHOGONAL_HAAR, 1, 2}, b);
  for (int j = 0; j < 2; ++j) CHECK((sa[j] - sb[j]).norm() == doctest::Approx(0.0));

  SeededRng c(6);
  CHECK_THROWS_AS(gen_states({FamilyKind::ORTHOGONAL_HAAR, 1, 3}, c), DomainError);
}

TEST_CASE("gen_dataset responses per protocol") {
  const Observable p0 = projector_zero(1);
  const Matrix I2 = Matrix::Identity(2, 2);
  const State zero = basis_state(2, 0);

  const Dataset clc = gen_dataset(Protocol::CLC, I2, {zero}, &p0);
  REQUIRE(clc.clc_responses.size() == 1);
  REQUIRE(clc.clc_responses[0].size() == 1);  // rank-1 projector: one entry
  CHECK(clc.clc_responses[0](0) == doctest::Approx(1.0));

  const Dataset requ = gen_dataset(Protocol::REQU, pauli_x(), {zero});
  CHECK((requ.state_responses[0] - basis_state(2, 1)).norm() < 1e-15);

  SeededRng rng(7);
  const Matrix u = haar_unitary(4, rng);
  const State psi = haar_state(4, rng);
  const Dataset qu = gen_dataset(Protocol::QU, u, {psi});
  CHECK((u * qu.state_responses[0] - psi).norm() < 1e-12);

  CHECK_THROWS_AS(gen_dataset(Protocol::CLC, I2, {zero}), DomainError);
}

TEST_CASE("CLC responses sum to one when the eigenbasis is complete") {
  SeededRng rng(8);
  const Observable zz =
      Observable::from_matrix(kron(pauli_z(), pauli_z()));  // r = d = 4
  REQUIRE(zz.rank() == 4);
  const Matrix u = haar_unitary(4, rng);
  const auto states = gen_states({FamilyKind::HAAR, 2, 3}, rng);
  const Dataset ds = gen_dataset(Protocol::CLC, u, states, &zz);
  for (const auto& a : ds.clc_responses) {
    CHECK(a.minCoeff() >= 0.0);
    CHECK(a.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("loss_clc hand values and zeros") {
  const Observable z = Observable::from_matrix(pauli_z());
  const State zero = basis_state(2, 0);

  // V = RX(pi) against U = I: both projector expectations are maximally wrong.
  const Dataset ds = gen_dataset(Protocol::CLC, Matrix::Identity(2, 2), {zero}, &z);
  CHECK(loss_clc(rx_circuit(kPi), ds, z) == doctest::Approx(2.0));

  // A circuit that reproduces the data-generating unitary has zero loss.
  SeededRng rng(9);
  ParamCircuit hea = build_hea(2, 2, rng);
  const Observable p0 = projector_zero(2);
  const auto states = gen_states({FamilyKind::HAAR, 2, 2}, rng);
  const Dataset self = gen_dataset(Protocol::CLC, as_matrix(hea), states, &p0);
  CHECK(loss_clc(hea, self, p0) < 1e-13);

  CHECK_THROWS_AS(loss_requ(rx_circuit(kPi), ds), DomainError);
}

TEST_CASE("loss_requ hand values") {
  const State zero = basis_state(2, 0);
  const Dataset ds = gen_dataset(Protocol::REQU, Matrix::Identity(2, 2), {zero});
  CHECK(loss_requ(rx_circuit(kPi), ds) == doctest::Approx(1.0));
  CHECK(loss_requ(rx_circuit(kPi / 2), ds) == doctest::Approx(0.5));

  // Global phases on the hypothesis do not register in the fidelity.
  SeededRng rng(10);
  const Matrix u = haar_unitary(4, rng);
  const auto states = gen_states({FamilyKind::HAAR, 2, 3}, rng);
  const Dataset big = gen_dataset(Protocol::REQU, u, states);
  const Matrix v = std::polar(1.0, 1.234) * u;
  CHECK(loss_value(Protocol::REQU, v, big, nullptr) < 1e-14);
}

TEST_CASE("loss_qu hand values") {
  const State zero = basis_state(2, 0);

  const Dataset from_id = gen_dataset(Protocol::QU, Matrix::Identity(2, 2), {zero});
  CHECK(loss_qu(rx_circuit(kPi), from_id) == doctest::Approx(1.0));

  const Matrix u = as_matrix(rx_circuit(kPi / 2));
  const Dataset ds = gen_dataset(Protocol::QU, u, {zero});
  CHECK(loss_qu(identity_circuit(1), ds) == doctest::Approx(0.5));
  CHECK(loss_value(Protocol::QU, u, ds, nullptr) < 1e-14);
}

TEST_CASE("extract_phases on a global-phase hypothesis") {
  SeededRng rng(11);
  const Matrix u = haar_unitary(4, rng);
  const auto states = gen_states({FamilyKind::HAAR, 2, 3}, rng);
  const Matrix v = std::polar(1.0, 2.5) * u;
  const PhaseVector pv = extract_phases(Protocol::REQU, u, v, states, 1e-9, 1e-9);
  CHECK(pv.aligned);
  CHECK(pv.spread < 1e-9);
  for (int j = 0; j < 3; ++j) CHECK(pv.values(j) == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("extract_phases flags constructed misalignment") {
  SeededRng rng(12);
  const Matrix u = haar_unitary(4, rng);
  const auto states = gen_states({FamilyKind::ORTHOGONAL_HAAR, 2, 2}, rng);
  RealVector alpha(2);
  alpha << 0.0, kPi / 2;
  const Matrix v = oracle_requ(u, states, alpha, rng);
  const PhaseVector pv = extract_phases(Protocol::REQU, u, v, states, 1e-9, 1e-9);
  CHECK_FALSE(pv.aligned);
  CHECK(pv.spread == doctest::Approx(kPi / 2).epsilon(1e-8));
}

TEST_CASE("extract_phases rejects imperfect hypotheses with the residual") {
  SeededRng rng(13);
  const Matrix u = haar_unitary(4, rng);
  const Matrix v = haar_unitary(4, rng);
  const auto states = gen_states({FamilyKind::HAAR, 2, 2}, rng);
  try {
    extract_phases(Protocol::REQU, u, v, states, 1e-6, 1e-3);
    FAIL("expected NotPerfectlyTrainedError");
  } catch (const NotPerfectlyTrainedError& e) {
    CHECK(e.max_residual > 1e-3);
  }
}

TEST_CASE("oracle_requ satisfies perfect training exactly") {
  SeededRng rng(14);

  // N = d with zero phases reproduces U itself.
  const Matrix u = haar_unitary(4, rng);
  const auto basis = gen_states({FamilyKind::ORTHOGONAL_HAAR, 2, 4}, rng);
  const Matrix v_same = oracle_requ(u, basis, RealVector::Zero(4), rng);
  CHECK(max_abs_diff(v_same, u) < 1e-10);

  // Orthogonal states with arbitrary phases: residual per state <= 1e-10.
  const auto orth = gen_states({FamilyKind::ORTHOGONAL_HAAR, 2, 3}, rng);
  RealVector alpha(3);
  alpha << 0.3, 5.1, 2.2;
  const Matrix v = oracle_requ(u, orth, alpha, rng);
  CHECK(is_unitary(v, 1e-10));
  for (int j = 0; j < 3; ++j) {
    const State lhs = u * orth[j];
    const State rhs = std::polar(1.0, alpha(j)) * (v * orth[j]);
    CHECK((lhs - rhs).norm() < 1e-10);
  }

  // Single state with alpha = pi flips the sign of the response.
  const State psi = haar_state(4, rng);
  RealVector pi_phase(1);
  pi_phase << kPi;
  const Matrix v1 = oracle_requ(u, {psi}, pi_phase, rng);
  CHECK((u * psi + v1 * psi).norm() < 1e-10);
}

TEST_CASE("oracle_qu satisfies perfect training exactly") {
  SeededRng rng(15);
  const Matrix u = haar_unitary(4, rng);

  const auto basis = gen_states({FamilyKind::ORTHOGONAL_HAAR, 2, 4}, rng);
  const Matrix v_same = oracle_qu(u, basis, RealVector::Zero(4), rng);
  CHECK(max_abs_diff(v_same, u) < 1e-10);

  const auto orth = gen_states({FamilyKind::ORTHOGONAL_HAAR, 2, 3}, rng);
  RealVector beta(3);
  beta << 1.0, 4.4, 0.2;
  const Matrix v = oracle_qu(u, orth, beta, rng);
  for (int j = 0; j < 3; ++j) {
    const State lhs = u.adjoint() * orth[j];
    const State rhs = std::polar(1.0, beta(j)) * (v.adjoint() * orth[j]);
    CHECK((lhs - rhs).norm() < 1e-10);
  }

  const State psi = haar_state(4, rng);
  RealVector halfpi(1);
  halfpi << kPi / 2;
  const Matrix v1 = oracle_qu(u, {psi}, halfpi, rng);
  const State lhs = u.adjoint() * psi;
  const State rhs = std::polar(1.0, kPi / 2) * (v1.adjoint() * psi);
  CHECK((lhs - rhs).norm() < 1e-10);
}

TEST_CASE("non-orthogonal states reject non-constant phases") {
  SeededRng rng(16);
  const Matrix u = haar_unitary(4, rng);
  const auto haar_pair = gen_states({FamilyKind::HAAR, 2, 2}, rng);
  RealVector distinct(2);
  distinct << 0.0, 1.0;
  CHECK_THROWS_AS(oracle_requ(u, haar_pair, distinct, rng), InfeasiblePhaseError);
  CHECK_THROWS_AS(oracle_qu(u, haar_pair, distinct, rng), InfeasiblePhaseError);

  // A common phase stays feasible and lands aligned.
  RealVector common = RealVector::Constant(2, 0.8);
  const Matrix v = oracle_requ(u, haar_pair, common, rng);
  const PhaseVector pv = extract_phases(Protocol::REQU, u, v, haar_pair, 1e-8, 1e-9);
  CHECK(pv.aligned);
}

TEST_CASE("perfect training and phase extraction agree") {
  SeededRng rng(17);
  const Matrix u = haar_unitary(4, rng);
  const auto states = gen_states({FamilyKind::ORTHOGONAL_HAAR, 2, 3}, rng);
  RealVector beta(3);
  beta << 0.5, 3.3, 6.0;
  const Matrix v = oracle_qu(u, states, beta, rng);

  const Dataset ds = gen_dataset(Protocol::QU, u, states);
  CHECK(loss_value(Protocol::QU, v, ds, nullptr) <= 1e-12);
  const PhaseVector pv = extract_phases(Protocol::QU, u, v, states, 1e-6, 1e-9);
  for (int j = 0; j < 3; ++j) {
    const Real delta = std::abs(std::fmod(pv.values(j) - beta(j) + 3 * kPi, 2 * kPi) - kPi);
    CHECK(delta < 1e-9);
  }
}

TEST_CASE("oracle_clc reproduces the data exactly for any draw") {
  SeededRng rng(18);
  const Observable z = Observable::from_matrix(pauli_z());
  const Matrix u = haar_unitary(2, rng);
  const auto states = gen_states({FamilyKind::HAAR, 1, 2}, rng);
  const Dataset ds = gen_dataset(Protocol::CLC, u, states, &z);
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix v = oracle_clc(u, z, rng);
    CHECK(is_unitary(v, 1e-10));
    CHECK(loss_value(Protocol::CLC, v, ds, &z) < 1e-20);
  }
}

TEST_CASE("dataset serialization round trip") {
  SeededRng rng(19);
  const Observable p0 = projector_zero(2);
  const Matrix u = haar_unitary(4, rng);
  const auto states = gen_states({FamilyKind::HAAR, 2, 2}, rng);
  for (Protocol p : {Protocol::CLC, Protocol::REQU, Protocol::QU}) {
    const Dataset ds = gen_dataset(p, u, states, &p0);
    std::stringstream buf;
    save_dataset(buf, ds);
    const Dataset back = load_dataset(buf);
    CHECK(back.protocol == ds.protocol);
    CHECK(back.n == ds.n);
    REQUIRE(back.size() == ds.size());
    for (int j = 0; j < ds.size(); ++j) {
      CHECK((back.states[j] - ds.states[j]).norm() == doctest::Approx(0.0));
      if (p == Protocol::CLC)
        CHECK((back.clc_responses[j] - ds.clc_responses[j]).norm() ==
              doctest::Approx(0.0));
      else
        CHECK((back.state_responses[j] - ds.state_responses[j]).norm() ==
              doctest::Approx(0.0));
    }
  }
}

TEST_CASE("dataset loader rejects malformed input") {
  std::stringstream bad("nonsense 1\n");
  CHECK_THROWS_AS(load_dataset(bad), DomainError);
}
