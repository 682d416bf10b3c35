/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QDL_EXPERIMENTS_HPP
#define QDL_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qdl/risk.hpp"

namespace qdl {

/// Usage-level error in CLI arguments or config files (exit code 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem failure (exit code 3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sweep configuration, parsed from a flat key = value text file. Keys:
///   protocols   comma list of clc,requ,qu
///   n           qubit count
///   N           comma list of dataset sizes
///   family      haar | orth | both
///   observable  observable spec string
///   source      trained | oracle
///   trials      trials per (protocol, N, family) point
///   layers      HEA depth
///   eta, beta1, beta2, epsilon, max_iters, target_loss, trace_stride
///   restarts    training restarts per trial
///   seed        master seed
///   out         output CSV path
struct ExperimentConfig {
  std::vector<Protocol> protocols{Protocol::CLC, Protocol::REQU, Protocol::QU};
  int n = 2;
  std::vector<int> N_values{1, 2, 4};
  std::vector<FamilyKind> families{FamilyKind::HAAR};
  std::string observable_spec = "proj0";
  HypothesisSource source = HypothesisSource::TRAINED;
  long trials = 40;
  int layers = 20;
  AdamConfig adam;
  int restarts = 5;
  std::uint64_t seed = 1;
  std::string output_path = "sweep.csv";
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// One CSV row per (config point, trial). Wall time is kept out of the CSV
/// so that identical (config, seed) runs are byte-identical regardless of
/// worker count; pass a timings path to record it separately.
struct TrialResult {
  Protocol protocol;
  int n = 0;
  int N = 0;
  FamilyKind family;
  std::string observable_spec;
  long trial_index = 0;
  std::uint64_t stream = 0;
  Real risk = 0.0;
  Real normalized_risk = 0.0;
  Real final_loss = 0.0;
  bool converged = false;
  std::optional<Real> phase_spread;
  std::optional<bool> aligned;
  long wall_time_ms = 0;
};

extern const char* kSweepCsvHeader;
std::string to_csv_row(const TrialResult& r);

/// Runs the full cross-product of a config. Rows are appended in
/// deterministic order and flushed per row; a summary block (mean ± SE per
/// point over converged trials) follows the rows. Restarting with a partial
/// output file resumes after the last complete row and produces the same
/// final file as an uninterrupted run. Infeasible points (orthogonal family
/// with N > 2^n) are skipped with a comment line.
void run_sweep(const ExperimentConfig& config, const std::string& out_path,
               int threads, const std::string& timings_path = "");

/// Bound table: one row per (N, aligned flag) with the exact bound value.
void run_bounds(std::ostream& out, Protocol protocol, int n,
                const std::vector<int>& N_values, const std::string& obs_spec,
                const std::vector<bool>& aligned_flags, Independence mode);

struct OracleVerifyResult {
  AveragedRiskEstimate estimate;
  BoundValue bound;
  bool pass = false;
};

/// ORACLE-ensemble mean against the matching bound; PASS iff
/// |mean - bound| <= 3 SE. CLC is unsupported (no exact-ensemble oracle).
OracleVerifyResult run_oracle_verify(std::ostream& out, Protocol protocol,
                                     int n, int N, FamilyKind family,
                                     const std::string& obs_spec, long trials,
                                     std::uint64_t seed, int threads);

/// Moment-identity reports (JSON lines) for Properties P1..P5 with
/// structured and random operands. Returns the largest z-score.
Real run_haar_check(std::ostream& out, int n, long samples, std::uint64_t seed);

}  // namespace qdl

#endif
