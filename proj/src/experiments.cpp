/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qdl/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <numbers>
#include <thread>

#include <json.hpp>

#include "qdl/errors.hpp"
#include "qdl/haar.hpp"
#include "qdl/linalg.hpp"

namespace qdl {

namespace {

std::string fmt(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "protocols") {
        cfg.protocols.clear();
        for (const auto& p : split(value, ',')) cfg.protocols.push_back(protocol_from_string(trim(p)));
      } else if (key == "n") {
        cfg.n = std::stoi(value);
      } else if (key == "N") {
        cfg.N_values.clear();
        for (const auto& v : split(value, ',')) cfg.N_values.push_back(std::stoi(trim(v)));
      } else if (key == "family") {
        cfg.families.clear();
        if (value == "both") {
          cfg.families = {FamilyKind::HAAR, FamilyKind::ORTHOGONAL_HAAR};
        } else {
          for (const auto& f : split(value, ',')) cfg.families.push_back(family_from_string(trim(f)));
        }
      } else if (key == "observable") {
        cfg.observable_spec = value;
      } else if (key == "source") {
        cfg.source = source_from_string(value);
      } else if (key == "trials") {
        cfg.trials = std::stol(value);
      } else if (key == "layers") {
        cfg.layers = std::stoi(value);
      } else if (key == "eta") {
        cfg.adam.learning_rate = std::stod(value);
      } else if (key == "beta1") {
        cfg.adam.beta1 = std::stod(value);
      } else if (key == "beta2") {
        cfg.adam.beta2 = std::stod(value);
      } else if (key == "epsilon") {
        cfg.adam.epsilon = std::stod(value);
      } else if (key == "max_iters") {
        cfg.adam.max_iterations = std::stol(value);
      } else if (key == "target_loss") {
        cfg.adam.target_loss = std::stod(value);
      } else if (key == "trace_stride") {
        cfg.adam.trace_stride = std::stol(value);
      } else if (key == "restarts") {
        cfg.restarts = std::stoi(value);
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else if (key == "out") {
        cfg.output_path = value;
      } else {
        throw UsageError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw UsageError("config line " + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
  if (cfg.N_values.empty()) throw UsageError("config: N values must be nonempty");
  if (cfg.protocols.empty()) throw UsageError("config: protocols must be nonempty");
  if (cfg.trials < 1) throw UsageError("config: trials must be >= 1");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in);
}

const char* kSweepCsvHeader =
    "protocol,n,N,family,observable,trial,seed,risk,normalized_risk,final_loss,"
    "converged,phase_spread,aligned";

std::string to_csv_row(const TrialResult& r) {
  std::ostringstream os;
  os << to_string(r.protocol) << ',' << r.n << ',' << r.N << ','
     << to_string(r.family) << ',' << r.observable_spec << ',' << r.trial_index
     << ',' << r.stream << ',' << fmt(r.risk) << ',' << fmt(r.normalized_risk)
     << ',' << fmt(r.final_loss) << ',' << (r.converged ? 1 : 0) << ',';
  if (r.phase_spread) os << fmt(*r.phase_spread);
  os << ',';
  if (r.aligned) os << (*r.aligned ? 1 : 0);
  return os.str();
}

namespace {

struct SweepJob {
  Protocol protocol;
  FamilyKind family;
  int N = 0;
  long trial = 0;
  long global_index = 0;
};

struct SkippedPoint {
  Protocol protocol;
  FamilyKind family;
  int N = 0;
};

// Parses one data row back into the fields the summary needs.
bool parse_row(const std::string& line, TrialResult& out) {
  const auto parts = split(line, ',');
  if (parts.size() != 13) return false;
  try {
    out.protocol = protocol_from_string(parts[0]);
    out.n = std::stoi(parts[1]);
    out.N = std::stoi(parts[2]);
    out.family = family_from_string(parts[3]);
    out.observable_spec = parts[4];
    out.trial_index = std::stol(parts[5]);
    out.stream = std::stoull(parts[6]);
    out.risk = std::stod(parts[7]);
    out.normalized_risk = std::stod(parts[8]);
    out.final_loss = std::stod(parts[9]);
    out.converged = parts[10] == "1";
    if (!parts[11].empty()) out.phase_spread = std::stod(parts[11]);
    if (!parts[12].empty()) out.aligned = parts[12] == "1";
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

TrialResult run_sweep_trial(const ExperimentConfig& cfg, const Observable& obs,
                            const SweepJob& job) {
  const auto t0 = std::chrono::steady_clock::now();
  SeededRng rng = derive_trial_rng(SeededRng(cfg.seed),
                                   static_cast<std::uint64_t>(job.global_index));
  TrialResult row;
  row.protocol = job.protocol;
  row.n = cfg.n;
  row.N = job.N;
  row.family = job.family;
  row.observable_spec = cfg.observable_spec;
  row.trial_index = job.trial;
  row.stream = rng.stream();

  const int d = 1 << cfg.n;
  const Matrix U = haar_unitary(d, rng);
  const std::vector<State> states = gen_states({job.family, cfg.n, job.N}, rng);
  const Dataset ds = gen_dataset(job.protocol, U, states, &obs);

  Matrix V;
  if (cfg.source == HypothesisSource::ORACLE) {
    if (job.protocol == Protocol::CLC) {
      V = oracle_clc(U, obs, rng);
    } else {
      RealVector phases(job.N);
      if (job.family == FamilyKind::ORTHOGONAL_HAAR)
        for (int j = 0; j < job.N; ++j) phases(j) = rng.uniform(0.0, 2.0 * std::numbers::pi);
      else
        phases.setConstant(rng.uniform(0.0, 2.0 * std::numbers::pi));
      V = job.protocol == Protocol::REQU ? oracle_requ(U, states, phases, rng)
                                         : oracle_qu(U, states, phases, rng);
    }
    row.converged = true;
    row.final_loss = loss_value(job.protocol, V, ds, &obs);
  } else {
    AdamConfig adam = cfg.adam;
    TrainingTrace best_trace;
    bool have = false;
    for (int attempt = 0; attempt < cfg.restarts && !row.converged; ++attempt) {
      ParamCircuit circuit = build_hea(cfg.n, cfg.layers, rng);
      auto [trained, trace] = train(job.protocol, ds, circuit, adam, &obs, nullptr);
      if (!have || trace.final_loss < best_trace.final_loss) {
        V = as_matrix(trained);
        best_trace = trace;
        have = true;
      }
      row.converged = trace.converged;
    }
    row.final_loss = best_trace.final_loss;
  }

  const RiskReport risk = analytical_risk(U, V, obs);
  row.risk = risk.risk;
  row.normalized_risk = risk.normalized_risk;

  if (job.protocol != Protocol::CLC && row.converged) {
    const bool oracle = cfg.source == HypothesisSource::ORACLE;
    const Real residual_tol =
        oracle ? 1e-8 : 10.0 * std::sqrt(2.0 * job.N * cfg.adam.target_loss);
    const Real aligned_tol = oracle ? 1e-9 : 1e-3;
    try {
      const PhaseVector pv = extract_phases(job.protocol, U, V, states,
                                            residual_tol, aligned_tol);
      row.phase_spread = pv.spread;
      row.aligned = pv.aligned;
    } catch (const NotPerfectlyTrainedError&) {
      // leave the phase fields empty; the row still reports loss and risk
    }
  }

  row.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  return row;
}

void write_summary(std::ofstream& out, const ExperimentConfig& cfg,
                   const std::vector<TrialResult>& rows,
                   const std::vector<SkippedPoint>& skipped) {
  for (const auto& s : skipped)
    out << "# skipped," << to_string(s.protocol) << ',' << cfg.n << ',' << s.N
        << ',' << to_string(s.family) << ",reason=orthogonal family needs N <= 2^n\n";
  for (Protocol protocol : cfg.protocols) {
    for (FamilyKind family : cfg.families) {
      for (int N : cfg.N_values) {
        Real sum = 0, comp = 0;
        long used = 0, total = 0;
        for (const auto& r : rows) {
          if (r.protocol != protocol || r.family != family || r.N != N) continue;
          ++total;
          if (!r.converged) continue;
          ++used;
          const Real y = r.risk - comp;
          const Real t = sum + y;
          comp = (t - sum) - y;
          sum = t;
        }
        if (total == 0) continue;
        const Real mean = used > 0 ? sum / used : 0.0;
        Real var = 0;
        for (const auto& r : rows) {
          if (r.protocol != protocol || r.family != family || r.N != N || !r.converged)
            continue;
          var += (r.risk - mean) * (r.risk - mean);
        }
        const Real se = used > 1 ? std::sqrt(var / (used - 1.0) / used) : 0.0;
        out << "# summary,protocol=" << to_string(protocol)
            << ",family=" << to_string(family) << ",N=" << N << ",mean="
            << (used > 0 ? fmt(mean) : "") << ",stderr=" << (used > 1 ? fmt(se) : "")
            << ",used=" << used << ",total=" << total
            << ",pt_rate=" << fmt(total > 0 ? static_cast<Real>(used) / total : 0.0)
            << "\n";
      }
    }
  }
  out << "# end\n";
}

}  // namespace

void run_sweep(const ExperimentConfig& cfg, const std::string& out_path,
               int threads, const std::string& timings_path) {
  const Observable obs = parse_observable(cfg.observable_spec, cfg.n);
  const int d = 1 << cfg.n;

  // Deterministic job list; infeasible points are recorded, not errors.
  std::vector<SweepJob> jobs;
  std::vector<SkippedPoint> skipped;
  long global = 0;
  for (Protocol protocol : cfg.protocols) {
    for (FamilyKind family : cfg.families) {
      for (int N : cfg.N_values) {
        if (N < 1) throw UsageError("sweep: N values must be >= 1");
        if (family == FamilyKind::ORTHOGONAL_HAAR && N > d) {
          skipped.push_back({protocol, family, N});
          continue;
        }
        for (long t = 0; t < cfg.trials; ++t)
          jobs.push_back({protocol, family, N, t, global++});
      }
    }
  }

  // Resume support: keep previously completed rows verbatim.
  std::vector<std::string> done_lines;
  std::vector<TrialResult> rows;
  {
    std::ifstream existing(out_path);
    if (existing) {
      std::string line;
      bool first = true;
      bool complete = false;
      while (std::getline(existing, line)) {
        if (first) {
          first = false;
          if (line != kSweepCsvHeader) break;  // unrelated file: start over
          continue;
        }
        if (line.rfind("# end", 0) == 0) complete = true;
        if (!line.empty() && line[0] == '#') continue;
        TrialResult r;
        if (!parse_row(line, r)) break;  // partial trailing line
        done_lines.push_back(line);
        rows.push_back(std::move(r));
      }
      if (complete && done_lines.size() == jobs.size()) return;
    }
  }
  if (done_lines.size() > jobs.size()) {
    done_lines.clear();
    rows.clear();
  }
  const long resume_from = static_cast<long>(done_lines.size());

  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw IoError("cannot write sweep output '" + out_path + "'");
  std::ofstream timings;
  if (!timings_path.empty()) {
    timings.open(timings_path, std::ios::trunc);
    if (!timings) throw IoError("cannot write timings file '" + timings_path + "'");
    timings << "global_index,wall_time_ms\n";
  }

  out << kSweepCsvHeader << "\n";
  for (const auto& line : done_lines) out << line << "\n";
  out.flush();

  const long total = static_cast<long>(jobs.size());
  std::vector<TrialResult> fresh(total - resume_from);
  std::vector<char> ready(total - resume_from, 0);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<long> next{resume_from};

  auto worker = [&]() {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= total) break;
      TrialResult r = run_sweep_trial(cfg, obs, jobs[i]);
      {
        std::lock_guard<std::mutex> lock(mu);
        fresh[i - resume_from] = std::move(r);
        ready[i - resume_from] = 1;
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  const int nthreads = std::max(1, threads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);

  // Rows stream to disk in job order regardless of completion order.
  for (long i = resume_from; i < total; ++i) {
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [&] { return ready[i - resume_from] == 1; });
    TrialResult r = fresh[i - resume_from];
    lock.unlock();
    out << to_csv_row(r) << "\n";
    out.flush();
    if (timings.is_open()) timings << i << ',' << r.wall_time_ms << "\n";
    rows.push_back(std::move(r));
  }
  for (auto& th : pool) th.join();

  write_summary(out, cfg, rows, skipped);
  if (!out) throw IoError("failed writing sweep output '" + out_path + "'");
}

void run_bounds(std::ostream& out, Protocol protocol, int n,
                const std::vector<int>& N_values, const std::string& obs_spec,
                const std::vector<bool>& aligned_flags, Independence mode) {
  if (N_values.empty()) throw UsageError("bounds: N values must be nonempty");
  const Observable obs = parse_observable(obs_spec, n);
  const int d = 1 << n;
  out << "protocol,d,N,family,observable,aligned,mode,bound,mean,stderr,trials,pt_rate,seed\n";
  const char* mode_str = mode == Independence::INDEPENDENT ? "independent" : "dependent";
  for (int N : N_values) {
    for (bool aligned : aligned_flags) {
      BoundValue b;
      switch (protocol) {
        case Protocol::CLC: b = nfl_bound_clc(d, N, obs, mode); break;
        case Protocol::REQU: b = nfl_bound_requ(d, N, obs, aligned, mode); break;
        default: b = nfl_bound_qu(d, N, obs, aligned); break;
      }
      out << to_string(protocol) << ',' << d << ',' << N << ",,"
          << obs_spec << ',' << (aligned ? 1 : 0) << ',' << mode_str << ','
          << fmt(b.value) << ",,,,,\n";
      if (protocol == Protocol::CLC) break;  // alignment plays no role
    }
  }
}

OracleVerifyResult run_oracle_verify(std::ostream& out, Protocol protocol, int n,
                                     int N, FamilyKind family,
                                     const std::string& obs_spec, long trials,
                                     std::uint64_t seed, int threads) {
  if (protocol == Protocol::CLC)
    throw UsageError("oracle-verify: no exact-ensemble oracle exists for clc");
  const Observable obs = parse_observable(obs_spec, n);
  const int d = 1 << n;
  const bool aligned = family == FamilyKind::HAAR;

  McAverageOptions opt;
  opt.threads = threads;
  const SeededRng master(seed);
  const AveragedRiskEstimate est = mc_average_risk(
      protocol, n, N, family, obs, HypothesisSource::ORACLE, trials, master, opt);

  const BoundValue bound = protocol == Protocol::REQU
                               ? nfl_bound_requ(d, N, obs, aligned)
                               : nfl_bound_qu(d, N, obs, aligned);

  OracleVerifyResult res;
  res.estimate = est;
  res.bound = bound;
  res.pass = std::abs(est.mean - bound.value) <= 3.0 * est.standard_error;

  out << "protocol,d,N,family,observable,aligned,mode,bound,mean,stderr,trials,pt_rate,seed\n";
  out << to_string(protocol) << ',' << d << ',' << N << ',' << to_string(family)
      << ',' << obs_spec << ',' << (aligned ? 1 : 0) << ",independent,"
      << fmt(bound.value) << ',' << fmt(est.mean) << ',' << fmt(est.standard_error)
      << ',' << est.trials << ',' << fmt(est.perfect_training_rate) << ',' << seed
      << "\n";
  return res;
}

Real run_haar_check(std::ostream& out, int n, long samples, std::uint64_t seed) {
  if (samples < 1) throw UsageError("haar-check: samples must be >= 1");
  if (n < 1) throw UsageError("haar-check: n must be >= 1");
  const int d = 1 << n;

  Matrix proj = Matrix::Zero(d, d);
  proj(0, 0) = 1.0;
  Matrix alt = Matrix::Zero(d, d);  // traceless diagonal pattern
  for (int i = 0; i < d; ++i) alt(i, i) = (i % 2 == 0) ? 1.0 : -1.0;

  SeededRng op_rng(seed, 0xA11CE);
  auto random_op = [&]() {
    Matrix g(d, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) g(i, j) = Complex(op_rng.normal(), op_rng.normal());
    return Matrix(g / std::sqrt(2.0 * d));
  };

  struct Case {
    MomentProperty p;
    const char* operands;
    std::vector<Matrix> ops;
  };
  std::vector<Case> cases;
  cases.push_back({MomentProperty::P1, "structured", {proj, proj}});
  cases.push_back({MomentProperty::P1, "random", {random_op(), random_op()}});
  cases.push_back({MomentProperty::P2, "structured", {alt, proj, alt, proj}});
  cases.push_back({MomentProperty::P2, "random",
                   {random_op(), random_op(), random_op(), random_op()}});
  cases.push_back({MomentProperty::P3, "structured", {alt, proj, alt, proj}});
  cases.push_back({MomentProperty::P3, "random",
                   {random_op(), random_op(), random_op(), random_op()}});
  cases.push_back({MomentProperty::P4, "structured", {alt}});
  cases.push_back({MomentProperty::P4, "random", {random_op()}});
  cases.push_back({MomentProperty::P5, "structured", {alt}});
  cases.push_back({MomentProperty::P5, "random", {random_op()}});

  Real max_z = 0;
  std::uint64_t stream = 1;
  for (auto& c : cases) {
    SeededRng rng(seed, stream++);
    const MomentCheckReport r = moment_check(c.p, d, c.ops, samples, rng);
    max_z = std::max(max_z, r.z_score);
    nlohmann::json j{{"property", to_string(r.property)},
                     {"d", r.d},
                     {"operands", c.operands},
                     {"estimate_re", r.estimate.real()},
                     {"estimate_im", r.estimate.imag()},
                     {"analytic_re", r.analytic.real()},
                     {"analytic_im", r.analytic.imag()},
                     {"stderr", r.standard_error},
                     {"z", r.z_score},
                     {"samples", r.samples}};
    out << j.dump() << "\n";
  }
  return max_z;
}

}  // namespace qdl
