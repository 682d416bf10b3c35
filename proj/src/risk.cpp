/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qdl/risk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "qdl/errors.hpp"
#include "qdl/haar.hpp"
#include "qdl/linalg.hpp"

namespace qdl {

RiskReport analytical_risk(const Matrix& U, const Matrix& V, const Observable& obs) {
  const int d = obs.dim();
  if (U.rows() != d || U.cols() != d || V.rows() != d || V.cols() != d)
    throw ShapeError("analytical_risk: dimension mismatch");
  const Matrix target = U.adjoint() * obs.matrix() * U;
  const Matrix hypo = V.adjoint() * obs.matrix() * V;
  RiskReport r;
  r.d = d;
  r.trace_term = (target * hypo).trace().real();
  r.risk = 2.0 * (obs.trace_sq() - r.trace_term) / (d * (d + 1.0));
  r.normalized_risk = r.risk * d * d;
  return r;
}

McRiskStats mc_risk_oracle_stats(const Matrix& U, const Matrix& V,
                                 const Observable& obs, long samples,
                                 SeededRng& rng) {
  if (samples < 1) throw DomainError("mc_risk_oracle: samples must be >= 1");
  const int d = obs.dim();
  if (U.rows() != d || V.rows() != d)
    throw ShapeError("mc_risk_oracle: dimension mismatch");
  Real sum = 0, sum2 = 0;
  for (long s = 0; s < samples; ++s) {
    const State psi = haar_state(d, rng);
    const State up = U * psi;
    const State vp = V * psi;
    const Real f = up.dot(obs.matrix() * up).real();
    const Real h = vp.dot(obs.matrix() * vp).real();
    const Real diff = (f - h) * (f - h);
    sum += diff;
    sum2 += diff * diff;
  }
  McRiskStats stats;
  stats.samples = samples;
  stats.mean = sum / samples;
  const Real var = std::max(0.0, (sum2 - samples * stats.mean * stats.mean) /
                                     std::max<Real>(1.0, samples - 1.0));
  stats.standard_error = std::sqrt(var / samples);
  return stats;
}

Real mc_risk_oracle(const Matrix& U, const Matrix& V, const Observable& obs,
                    long samples, SeededRng& rng) {
  return mc_risk_oracle_stats(U, V, obs, samples, rng).mean;
}

namespace {

Real clamp_nonneg(Real x) { return x < 0 ? 0 : x; }

}  // namespace

BoundValue nfl_bound_clc(int d, int N, const Observable& obs, Independence mode) {
  if (d < 2 || N < 1) throw DomainError("nfl_bound_clc: need d >= 2, N >= 1");
  const Real pf = bound_prefactor(obs);
  const Real denom = Real(d) * d * (d + 1.0) * (Real(d) * d - 1.0);
  BoundValue b{Protocol::CLC, d, N, false, mode, 0.0};
  if (mode == Independence::INDEPENDENT)
    b.value = 2.0 * clamp_nonneg(Real(d) * d - N - 1.0) * pf / denom;
  else
    b.value = 2.0 * (Real(d) * d - std::min<Real>(N, Real(d) * d)) * pf / denom;
  return b;
}

BoundValue nfl_bound_requ(int d, int N, const Observable& obs, bool aligned,
                          Independence mode) {
  if (d < 2 || N < 1) throw DomainError("nfl_bound_requ: need d >= 2, N >= 1");
  const Real pf = bound_prefactor(obs);
  BoundValue b{Protocol::REQU, d, N, aligned, mode, 0.0};
  if (mode == Independence::DEPENDENT) {
    const Real denom = Real(d) * d * (d + 1.0) * (Real(d) * d - 1.0);
    b.value = (Real(d) * d - std::min<Real>(N, Real(d) * d)) * pf / denom;
    return b;
  }
  const Real denom = std::pow(Real(d), 4) * (d + 1.0);
  const Real count = aligned ? clamp_nonneg(Real(d) * d - Real(N) * N - 1.0)
                             : clamp_nonneg(Real(d) * d - N - 1.0);
  b.value = 2.0 * count * pf / denom;
  return b;
}

BoundValue nfl_bound_qu(int d, int N, const Observable& obs, bool aligned) {
  if (d < 2 || N < 1) throw DomainError("nfl_bound_qu: need d >= 2, N >= 1");
  const Real eff_n = std::min(N, d);  // N > d adds nothing beyond a full basis
  const Real pf = bound_prefactor(obs);
  const Real denom = std::pow(Real(d), 3) * (d + 1.0);
  Real value = (d - eff_n) * pf;
  if (!aligned) value += (eff_n * eff_n - eff_n) * offdiag_square_sum(obs);
  BoundValue b{Protocol::QU, d, N, aligned, Independence::INDEPENDENT, value / denom};
  return b;
}

const char* to_string(HypothesisSource s) {
  return s == HypothesisSource::TRAINED ? "trained" : "oracle";
}

HypothesisSource source_from_string(const std::string& s) {
  if (s == "trained") return HypothesisSource::TRAINED;
  if (s == "oracle") return HypothesisSource::ORACLE;
  throw DomainError("unknown hypothesis source '" + s + "'");
}

namespace {

constexpr Real kTwoPi = 2.0 * std::numbers::pi;

struct TrialOutcome {
  bool converged = false;
  Real risk = 0.0;
};

TrialOutcome run_one_trial(Protocol protocol, int n, int N, FamilyKind family,
                           const Observable& obs, HypothesisSource source,
                           const McAverageOptions& opt, SeededRng rng) {
  const int d = 1 << n;
  const Matrix U = haar_unitary(d, rng);
  const std::vector<State> states = gen_states({family, n, N}, rng);

  TrialOutcome out;
  if (source == HypothesisSource::ORACLE) {
    Matrix V;
    if (protocol == Protocol::CLC) {
      V = oracle_clc(U, obs, rng);
    } else {
      // Orthogonal inputs admit arbitrary per-state phases; non-orthogonal
      // inputs force phase alignment, so draw one common phase.
      RealVector phases(N);
      if (family == FamilyKind::ORTHOGONAL_HAAR) {
        for (int j = 0; j < N; ++j) phases(j) = rng.uniform(0.0, kTwoPi);
      } else {
        phases.setConstant(rng.uniform(0.0, kTwoPi));
      }
      V = protocol == Protocol::REQU ? oracle_requ(U, states, phases, rng)
                                     : oracle_qu(U, states, phases, rng);
    }
    const Dataset check = gen_dataset(protocol, U, states, &obs);
    if (loss_value(protocol, V, check, &obs) > opt.oracle_residual_tol)
      throw EstimationError("mc_average_risk: oracle hypothesis failed its own loss check");
    out.converged = true;
    out.risk = analytical_risk(U, V, obs).risk;
    return out;
  }

  const Dataset ds = gen_dataset(protocol, U, states, &obs);
  for (int attempt = 0; attempt < opt.restarts; ++attempt) {
    ParamCircuit circuit = build_hea(n, opt.layers, rng);
    auto [trained, trace] = train(protocol, ds, circuit, opt.adam, &obs, nullptr);
    if (trace.converged) {
      out.converged = true;
      out.risk = analytical_risk(U, as_matrix(trained), obs).risk;
      break;
    }
  }
  return out;
}

}  // namespace

AveragedRiskEstimate mc_average_risk(Protocol protocol, int n, int N,
                                     FamilyKind family, const Observable& obs,
                                     HypothesisSource source, long trials,
                                     const SeededRng& master,
                                     const McAverageOptions& options,
                                     bool allow_clc_oracle) {
  if (trials < 2) throw DomainError("mc_average_risk: trials must be >= 2");
  if (source == HypothesisSource::ORACLE && protocol == Protocol::CLC &&
      !allow_clc_oracle)
    throw DomainError(
        "mc_average_risk: the CLC oracle covers only the eigenbasis-phase family; "
        "pass allow_clc_oracle to use it anyway");

  std::vector<TrialOutcome> outcomes(trials);
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= trials) break;
      outcomes[i] = run_one_trial(protocol, n, N, family, obs, source, options,
                                  derive_trial_rng(master, static_cast<std::uint64_t>(i)));
    }
  };
  const int nthreads = std::max(1, options.threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Kahan-compensated, index-ordered aggregation: the result is identical
  // for any worker count.
  Real sum = 0, comp = 0;
  long used = 0;
  for (const auto& o : outcomes) {
    if (!o.converged) continue;
    ++used;
    const Real y = o.risk - comp;
    const Real t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  if (used == 0)
    throw EstimationError("mc_average_risk: no trial reached perfect training");

  AveragedRiskEstimate est;
  est.trials = used;
  est.trials_total = trials;
  est.perfect_training_rate = static_cast<Real>(used) / trials;
  est.mean = sum / used;

  Real var_sum = 0, var_comp = 0;
  for (const auto& o : outcomes) {
    if (!o.converged) continue;
    const Real dv = (o.risk - est.mean) * (o.risk - est.mean) - var_comp;
    const Real t = var_sum + dv;
    var_comp = (t - var_sum) - dv;
    var_sum = t;
  }
  est.standard_error = used > 1 ? std::sqrt(var_sum / (used - 1.0) / used) : 0.0;
  return est;
}

}  // namespace qdl
