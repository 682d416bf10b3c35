/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qdl/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qdl/errors.hpp"
#include "qdl/haar.hpp"
#include "qdl/linalg.hpp"

namespace qdl {

namespace {
constexpr Real kTwoPi = 2.0 * std::numbers::pi;
constexpr Real kGramOrthTol = 1e-8;
constexpr Real kConstantPhaseTol = 1e-12;
}  // namespace

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::CLC: return "clc";
    case Protocol::REQU: return "requ";
    default: return "qu";
  }
}

Protocol protocol_from_string(const std::string& s) {
  if (s == "clc") return Protocol::CLC;
  if (s == "requ") return Protocol::REQU;
  if (s == "qu") return Protocol::QU;
  throw DomainError("unknown protocol '" + s + "'");
}

const char* to_string(FamilyKind k) {
  return k == FamilyKind::HAAR ? "haar" : "orth";
}

FamilyKind family_from_string(const std::string& s) {
  if (s == "haar") return FamilyKind::HAAR;
  if (s == "orth" || s == "orthogonal") return FamilyKind::ORTHOGONAL_HAAR;
  throw DomainError("unknown state family '" + s + "'");
}

std::vector<State> gen_states(const StateFamily& family, SeededRng& rng) {
  if (family.n < 1 || family.N < 1) throw DomainError("gen_states: need n >= 1, N >= 1");
  const int d = 1 << family.n;
  std::vector<State> states;
  states.reserve(family.N);
  if (family.kind == FamilyKind::ORTHOGONAL_HAAR) {
    if (family.N > d)
      throw DomainError("gen_states: orthogonal family needs N <= 2^n");
    const Matrix w = haar_unitary(d, rng);
    for (int j = 0; j < family.N; ++j) states.push_back(w.col(j));
  } else {
    for (int j = 0; j < family.N; ++j) states.push_back(haar_state(d, rng));
  }
  return states;
}

Dataset gen_dataset(Protocol protocol, const Matrix& U,
                    const std::vector<State>& states, const Observable* observable) {
  if (states.empty()) throw DomainError("gen_dataset: no input states");
  const int d = static_cast<int>(U.rows());
  if (U.cols() != d) throw ShapeError("gen_dataset: U is not square");
  for (const auto& s : states)
    if (s.size() != d) throw ShapeError("gen_dataset: state dimension mismatch");

  Dataset ds;
  ds.protocol = protocol;
  ds.n = static_cast<int>(std::round(std::log2(d)));
  ds.states = states;

  switch (protocol) {
    case Protocol::CLC: {
      if (observable == nullptr)
        throw DomainError("gen_dataset: CLC requires an observable");
      if (observable->dim() != d)
        throw ShapeError("gen_dataset: observable dimension mismatch");
      for (const auto& s : states) {
        const State out = U * s;
        RealVector a(observable->rank());
        int idx = 0;
        for (int q : observable->support()) {
          const Complex amp = observable->eigenvectors().col(q).dot(out);
          a(idx++) = std::norm(amp);
        }
        ds.clc_responses.push_back(std::move(a));
      }
      break;
    }
    case Protocol::REQU:
      for (const auto& s : states) ds.state_responses.push_back(U * s);
      break;
    case Protocol::QU:
      for (const auto& s : states) ds.state_responses.push_back(U.adjoint() * s);
      break;
  }
  return ds;
}

namespace {

Real loss_clc_matrix(const Matrix& V, const Dataset& ds, const Observable& obs) {
  Real total = 0;
  for (int j = 0; j < ds.size(); ++j) {
    const State out = V * ds.states[j];
    int idx = 0;
    for (int q : obs.support()) {
      const Real e = std::norm(obs.eigenvectors().col(q).dot(out));
      const Real diff = e - ds.clc_responses[j](idx++);
      total += diff * diff;
    }
  }
  return total / ds.size();
}

Real loss_requ_matrix(const Matrix& V, const Dataset& ds) {
  Real fid = 0;
  for (int j = 0; j < ds.size(); ++j)
    fid += std::norm(ds.state_responses[j].dot(V * ds.states[j]));
  return 1.0 - fid / ds.size();
}

Real loss_qu_matrix(const Matrix& V, const Dataset& ds) {
  Real fid = 0;
  for (int j = 0; j < ds.size(); ++j)
    fid += std::norm(ds.states[j].dot(V * ds.state_responses[j]));
  return 1.0 - fid / ds.size();
}

}  // namespace

Real loss_clc(const ParamCircuit& circuit, const Dataset& ds, const Observable& obs) {
  if (ds.protocol != Protocol::CLC) throw DomainError("loss_clc: dataset protocol mismatch");
  Real total = 0;
  for (int j = 0; j < ds.size(); ++j) {
    const State out = qdl::apply(circuit, ds.states[j]);
    int idx = 0;
    for (int q : obs.support()) {
      const Real e = std::norm(obs.eigenvectors().col(q).dot(out));
      const Real diff = e - ds.clc_responses[j](idx++);
      total += diff * diff;
    }
  }
  return total / ds.size();
}

Real loss_requ(const ParamCircuit& circuit, const Dataset& ds) {
  if (ds.protocol != Protocol::REQU) throw DomainError("loss_requ: dataset protocol mismatch");
  Real fid = 0;
  for (int j = 0; j < ds.size(); ++j)
    fid += std::norm(ds.state_responses[j].dot(qdl::apply(circuit, ds.states[j])));
  return 1.0 - fid / ds.size();
}

Real loss_qu(const ParamCircuit& circuit, const Dataset& ds) {
  if (ds.protocol != Protocol::QU) throw DomainError("loss_qu: dataset protocol mismatch");
  Real fid = 0;
  for (int j = 0; j < ds.size(); ++j)
    fid += std::norm(ds.states[j].dot(qdl::apply(circuit, ds.state_responses[j])));
  return 1.0 - fid / ds.size();
}

Real loss_value(Protocol protocol, const ParamCircuit& circuit, const Dataset& ds,
                const Observable* obs) {
  switch (protocol) {
    case Protocol::CLC:
      if (obs == nullptr) throw DomainError("loss_value: CLC requires an observable");
      return loss_clc(circuit, ds, *obs);
    case Protocol::REQU: return loss_requ(circuit, ds);
    default: return loss_qu(circuit, ds);
  }
}

Real loss_value(Protocol protocol, const Matrix& V, const Dataset& ds,
                const Observable* obs) {
  switch (protocol) {
    case Protocol::CLC:
      if (obs == nullptr) throw DomainError("loss_value: CLC requires an observable");
      return loss_clc_matrix(V, ds, *obs);
    case Protocol::REQU: return loss_requ_matrix(V, ds);
    default: return loss_qu_matrix(V, ds);
  }
}

Real circular_spread(const RealVector& phases) {
  Real spread = 0;
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    for (Eigen::Index j = i + 1; j < phases.size(); ++j) {
      Real delta = std::fmod(std::abs(phases(i) - phases(j)), kTwoPi);
      delta = std::min(delta, kTwoPi - delta);
      spread = std::max(spread, delta);
    }
  }
  return spread;
}

PhaseVector extract_phases(Protocol protocol, const Matrix& U, const Matrix& V,
                           const std::vector<State>& states, Real residual_tol,
                           Real aligned_tol) {
  if (protocol == Protocol::CLC)
    throw DomainError("extract_phases: phases are defined for REQU/QU only");
  const int N = static_cast<int>(states.size());
  PhaseVector pv;
  pv.values.resize(N);
  Real max_residual = 0;
  for (int j = 0; j < N; ++j) {
    State target, hypo;
    if (protocol == Protocol::REQU) {
      target = U * states[j];
      hypo = V * states[j];
    } else {
      target = U.adjoint() * states[j];
      hypo = V.adjoint() * states[j];
    }
    const Complex overlap = hypo.dot(target);  // arg <psi|V†U|psi> resp. <psi|VU†|psi>
    const Real phase = std::arg(overlap);
    pv.values(j) = phase < 0 ? phase + kTwoPi : phase;
    const Real residual = (target - std::polar(1.0, phase) * hypo).norm();
    max_residual = std::max(max_residual, residual);
  }
  if (max_residual > residual_tol)
    throw NotPerfectlyTrainedError("extract_phases: hypothesis is not perfectly trained",
                                   max_residual);
  pv.spread = circular_spread(pv.values);
  pv.aligned = pv.spread <= aligned_tol;
  return pv;
}

namespace {

// Shared core of the two quantum oracles: the unitary W fixing each state up
// to its phase, W = B blockdiag(diag(e^{-i phi_j}), Y) B†. Orthogonal states
// admit arbitrary phase vectors; non-orthogonal states force a constant one,
// because a unitary with distinct eigenvalues needs orthogonal eigenvectors.
Matrix phase_fixing_unitary(const std::vector<State>& states, const RealVector& phases,
                            SeededRng& rng) {
  const int N = static_cast<int>(states.size());
  const int d = static_cast<int>(states.front().size());
  if (phases.size() != N)
    throw ShapeError("oracle: phase vector length does not match state count");

  bool orthogonal = true;
  for (int i = 0; i < N && orthogonal; ++i)
    for (int j = i + 1; j < N; ++j)
      if (std::abs(states[i].dot(states[j])) > kGramOrthTol) {
        orthogonal = false;
        break;
      }
  const bool constant_phase = circular_spread(phases) <= kConstantPhaseTol;
  if (!orthogonal && !constant_phase)
    throw InfeasiblePhaseError(
        "oracle: non-orthogonal states admit only a constant phase vector");

  const Matrix basis = qr_unitary_extend(states, rng);
  Matrix core = Matrix::Zero(d, d);
  if (constant_phase) {
    // A constant phase acts as a scalar on the whole span, so the basis
    // choice inside the span is immaterial.
    core.topLeftCorner(N, N) =
        std::polar(1.0, -phases(0)) * Matrix::Identity(N, N);
  } else {
    for (int j = 0; j < N; ++j) core(j, j) = std::polar(1.0, -phases(j));
  }
  if (d > N) core.bottomRightCorner(d - N, d - N) = haar_unitary(d - N, rng);
  return basis * core * basis.adjoint();
}

}  // namespace

Matrix oracle_requ(const Matrix& U, const std::vector<State>& states,
                   const RealVector& alpha, SeededRng& rng) {
  return U * phase_fixing_unitary(states, alpha, rng);
}

Matrix oracle_qu(const Matrix& U, const std::vector<State>& states,
                 const RealVector& beta, SeededRng& rng) {
  return phase_fixing_unitary(states, beta, rng).adjoint() * U;
}

Matrix oracle_clc(const Matrix& U, const Observable& obs, SeededRng& rng) {
  const int d = obs.dim();
  Matrix diag = Matrix::Zero(d, d);
  for (int q = 0; q < d; ++q)
    diag(q, q) = std::polar(1.0, rng.uniform(0.0, kTwoPi));
  const Matrix D = obs.eigenvectors() * diag * obs.eigenvectors().adjoint();
  return D * U;
}

namespace {

void write_state_line(std::ostream& out, const State& s) {
  out.precision(17);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (i) out << " ";
    out << s(i).real() << "," << s(i).imag();
  }
  out << "\n";
}

State read_state_line(std::istream& in, int d) {
  State s(d);
  for (int i = 0; i < d; ++i) {
    std::string pair;
    in >> pair;
    const auto comma = pair.find(',');
    if (!in || comma == std::string::npos)
      throw DomainError("dataset: malformed amplitude entry");
    s(i) = Complex(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
  }
  return s;
}

}  // namespace

void save_dataset(std::ostream& out, const Dataset& ds) {
  out << "qdl-dataset 1\n";
  out << "protocol " << to_string(ds.protocol) << "\n";
  out << "n " << ds.n << "\n";
  out << "N " << ds.size() << "\n";
  if (ds.protocol == Protocol::CLC) out << "r " << ds.clc_responses.front().size() << "\n";
  out.precision(17);
  for (int j = 0; j < ds.size(); ++j) {
    out << "state ";
    write_state_line(out, ds.states[j]);
    if (ds.protocol == Protocol::CLC) {
      out << "response";
      const RealVector& a = ds.clc_responses[j];
      for (Eigen::Index q = 0; q < a.size(); ++q) out << " " << a(q);
      out << "\n";
    } else {
      out << "response ";
      write_state_line(out, ds.state_responses[j]);
    }
  }
}

Dataset load_dataset(std::istream& in) {
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (!in || magic != "qdl-dataset" || version != 1)
    throw DomainError("dataset: bad header");
  Dataset ds;
  std::string key, value;
  in >> key >> value;
  if (key != "protocol") throw DomainError("dataset: expected protocol");
  ds.protocol = protocol_from_string(value);
  int N = 0, r = 0;
  in >> key >> ds.n;
  if (key != "n") throw DomainError("dataset: expected n");
  in >> key >> N;
  if (key != "N") throw DomainError("dataset: expected N");
  if (ds.protocol == Protocol::CLC) {
    in >> key >> r;
    if (key != "r") throw DomainError("dataset: expected r");
  }
  const int d = 1 << ds.n;
  for (int j = 0; j < N; ++j) {
    in >> key;
    if (key != "state") throw DomainError("dataset: expected state line");
    State s = read_state_line(in, d);
    if (!is_normalized(s, 1e-9)) throw DomainError("dataset: state is not unit norm");
    ds.states.push_back(std::move(s));
    in >> key;
    if (key != "response") throw DomainError("dataset: expected response line");
    if (ds.protocol == Protocol::CLC) {
      RealVector a(r);
      for (int q = 0; q < r; ++q) in >> a(q);
      if (!in) throw DomainError("dataset: malformed response");
      ds.clc_responses.push_back(std::move(a));
    } else {
      State resp = read_state_line(in, d);
      if (!is_normalized(resp, 1e-9)) throw DomainError("dataset: response not unit norm");
      ds.state_responses.push_back(std::move(resp));
    }
  }
  return ds;
}

void save_dataset(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write dataset file '" + path + "'");
  save_dataset(out, ds);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open dataset file '" + path + "'");
  return load_dataset(in);
}

}  // namespace qdl
