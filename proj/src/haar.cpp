/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qdl/haar.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>

#include "qdl/errors.hpp"
#include "qdl/linalg.hpp"

namespace qdl {

Matrix haar_unitary(int d, SeededRng& rng) {
  if (d < 1) throw DomainError("haar_unitary: d must be >= 1");
  Matrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  Matrix r = q.adjoint() * g;
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

State haar_state(int d, SeededRng& rng) {
  if (d < 1) throw DomainError("haar_state: d must be >= 1");
  State v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(rng.normal(), rng.normal());
  v /= v.norm();
  return v;
}

const char* to_string(MomentProperty p) {
  switch (p) {
    case MomentProperty::P1: return "P1";
    case MomentProperty::P2: return "P2";
    case MomentProperty::P3: return "P3";
    case MomentProperty::P4: return "P4";
    default: return "P5";
  }
}

namespace {

int arity(MomentProperty p) {
  switch (p) {
    case MomentProperty::P1: return 2;
    case MomentProperty::P2:
    case MomentProperty::P3: return 4;
    default: return 1;
  }
}

}  // namespace

Complex moment_analytic(MomentProperty p, int d, const std::vector<Matrix>& ops) {
  const Real dd = static_cast<Real>(d);
  switch (p) {
    case MomentProperty::P1:
      return ops[0].trace() * ops[1].trace() / dd;
    case MomentProperty::P2: {
      const Complex tA = ops[0].trace(), tB = ops[1].trace();
      const Complex tC = ops[2].trace(), tD = ops[3].trace();
      const Complex tAC = (ops[0] * ops[2]).trace();
      const Complex tBD = (ops[1] * ops[3]).trace();
      return (tAC * tB * tD + tA * tC * tBD) / (dd * dd - 1.0) -
             (tA * tB * tC * tD + tAC * tBD) / (dd * (dd * dd - 1.0));
    }
    case MomentProperty::P3: {
      const Complex tA = ops[0].trace(), tB = ops[1].trace();
      const Complex tC = ops[2].trace(), tD = ops[3].trace();
      const Complex tAC = (ops[0] * ops[2]).trace();
      const Complex tBD = (ops[1] * ops[3]).trace();
      return (tA * tB * tC * tD + tAC * tBD) / (dd * dd - 1.0) -
             (tAC * tB * tD + tA * tC * tBD) / (dd * (dd * dd - 1.0));
    }
    case MomentProperty::P4:
      return ops[0].trace() / dd;
    default: {
      const Complex tA = ops[0].trace();
      const Complex tA2 = (ops[0] * ops[0]).trace();
      return (tA * tA + tA2) / (dd * (dd + 1.0));
    }
  }
}

MomentCheckReport moment_check(MomentProperty p, int d,
                               const std::vector<Matrix>& ops, long samples,
                               SeededRng& rng) {
  if (d < 1) throw DomainError("moment_check: d must be >= 1");
  if (samples < 1) throw DomainError("moment_check: samples must be >= 1");
  if (static_cast<int>(ops.size()) != arity(p))
    throw DomainError("moment_check: operand count does not match property arity");
  for (const auto& op : ops)
    if (op.rows() != d || op.cols() != d)
      throw ShapeError("moment_check: operand dimension mismatch");

  Complex sum(0, 0);
  Real sum_re2 = 0, sum_im2 = 0;
  for (long s = 0; s < samples; ++s) {
    Complex val;
    switch (p) {
      case MomentProperty::P1: {
        const Matrix w = haar_unitary(d, rng);
        val = (w * ops[0] * w.adjoint() * ops[1]).trace();
        break;
      }
      case MomentProperty::P2: {
        const Matrix w = haar_unitary(d, rng);
        const Matrix wa = w * ops[0] * w.adjoint();
        const Matrix wc = w * ops[2] * w.adjoint();
        val = (wa * ops[1] * wc * ops[3]).trace();
        break;
      }
      case MomentProperty::P3: {
        const Matrix w = haar_unitary(d, rng);
        const Matrix wdag = w.adjoint();
        val = (w * ops[0] * wdag * ops[1]).trace() *
              (w * ops[2] * wdag * ops[3]).trace();
        break;
      }
      case MomentProperty::P4: {
        const State psi = haar_state(d, rng);
        val = psi.dot(ops[0] * psi);  // <psi| A |psi>
        break;
      }
      default: {
        const State psi = haar_state(d, rng);
        const Complex e = psi.dot(ops[0] * psi);
        val = e * e;
        break;
      }
    }
    sum += val;
    sum_re2 += val.real() * val.real();
    sum_im2 += val.imag() * val.imag();
  }

  MomentCheckReport report;
  report.property = p;
  report.d = d;
  report.samples = samples;
  report.estimate = sum / static_cast<Real>(samples);
  report.analytic = moment_analytic(p, d, ops);
  const Real n = static_cast<Real>(samples);
  const Real var_re =
      std::max(0.0, (sum_re2 - n * report.estimate.real() * report.estimate.real()) /
                        std::max(1.0, n - 1.0));
  const Real var_im =
      std::max(0.0, (sum_im2 - n * report.estimate.imag() * report.estimate.imag()) /
                        std::max(1.0, n - 1.0));
  report.standard_error = std::sqrt((var_re + var_im) / n);
  const Real diff = std::abs(report.estimate - report.analytic);
  if (report.standard_error > 0)
    report.z_score = diff / report.standard_error;
  else
    report.z_score = diff == 0.0 ? 0.0 : std::numeric_limits<Real>::infinity();
  return report;
}

}  // namespace qdl
