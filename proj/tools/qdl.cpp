/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "qdl/experiments.hpp"
#include "qdl/haar.hpp"
#include "qdl/linalg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitIo = 3;

std::vector<int> parse_n_list(const std::string& value) {
  std::vector<int> out;
  const auto colon = value.find(':');
  if (colon != std::string::npos) {
    const int lo = std::stoi(value.substr(0, colon));
    const int hi = std::stoi(value.substr(colon + 1));
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::trunc);
  if (!file) throw qdl::IoError("cannot open output file '" + path + "'");
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learning-protocol risk laboratory for unitary dynamics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_path;
  app.add_option("--seed", seed, "master seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads")->capture_default_str();
  app.add_option("--out", out_path, "output path (default stdout)");

  auto* haar_cmd = app.add_subcommand("haar-check", "verify Haar moment identities");
  int hc_n = 1;
  long hc_samples = 100000;
  haar_cmd->add_option("--n", hc_n, "qubit count")->capture_default_str();
  haar_cmd->add_option("--samples", hc_samples, "Monte Carlo samples")->capture_default_str();

  auto* bounds_cmd = app.add_subcommand("bounds", "tabulate risk lower bounds");
  std::string b_protocol = "requ", b_obs = "proj0", b_nlist = "1:4", b_aligned = "both",
              b_mode = "independent";
  int b_n = 2;
  bounds_cmd->add_option("--protocol", b_protocol, "clc|requ|qu")->capture_default_str();
  bounds_cmd->add_option("--n", b_n, "qubit count")->capture_default_str();
  bounds_cmd->add_option("--N", b_nlist, "sizes, e.g. 1:4 or 1,2,8")->capture_default_str();
  bounds_cmd->add_option("--observable", b_obs, "observable spec")->capture_default_str();
  bounds_cmd->add_option("--aligned", b_aligned, "true|false|both")->capture_default_str();
  bounds_cmd->add_option("--mode", b_mode, "independent|dependent")->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "run a trial sweep from a config file");
  std::string sweep_config, timings_path;
  bool seed_given = false;
  sweep_cmd->add_option("--config", sweep_config, "config file")->required();
  sweep_cmd->add_option("--timings", timings_path, "optional wall-time sidecar CSV");
  sweep_cmd->add_flag("--override-seed", seed_given,
                      "use the global --seed instead of the config seed");

  auto* verify_cmd = app.add_subcommand("oracle-verify",
                                        "compare the oracle-ensemble mean risk to its bound");
  std::string v_protocol = "requ", v_family = "orth", v_obs = "proj0";
  int v_n = 2, v_N = 2;
  long v_trials = 2000;
  verify_cmd->add_option("--protocol", v_protocol, "requ|qu")->capture_default_str();
  verify_cmd->add_option("--n", v_n, "qubit count")->capture_default_str();
  verify_cmd->add_option("--N", v_N, "training set size")->capture_default_str();
  verify_cmd->add_option("--family", v_family, "haar|orth")->capture_default_str();
  verify_cmd->add_option("--observable", v_obs, "observable spec")->capture_default_str();
  verify_cmd->add_option("--trials", v_trials, "Monte Carlo trials")->capture_default_str();

  auto* train_cmd = app.add_subcommand("train", "single training run with trace dump");
  std::string t_protocol = "requ", t_family = "haar", t_obs = "proj0", t_trace;
  int t_n = 2, t_N = 2, t_layers = 20;
  long t_iters = 1000;
  double t_eta = 0.01, t_target = 1e-6;
  long t_stride = 10;
  train_cmd->add_option("--protocol", t_protocol, "clc|requ|qu")->capture_default_str();
  train_cmd->add_option("--n", t_n, "qubit count")->capture_default_str();
  train_cmd->add_option("--N", t_N, "training set size")->capture_default_str();
  train_cmd->add_option("--family", t_family, "haar|orth")->capture_default_str();
  train_cmd->add_option("--observable", t_obs, "observable spec")->capture_default_str();
  train_cmd->add_option("--layers", t_layers, "ansatz depth")->capture_default_str();
  train_cmd->add_option("--iters", t_iters, "max iterations")->capture_default_str();
  train_cmd->add_option("--eta", t_eta, "learning rate")->capture_default_str();
  train_cmd->add_option("--target", t_target, "target loss")->capture_default_str();
  train_cmd->add_option("--stride", t_stride, "trace decimation stride")->capture_default_str();
  train_cmd->add_option("--trace", t_trace, "loss-history CSV path");

  auto* risk_cmd = app.add_subcommand("risk", "analytical risk of V against U under O");
  std::string r_u, r_v, r_obs = "proj0";
  int r_n = 0;
  risk_cmd->add_option("--u", r_u, "target unitary file")->required();
  risk_cmd->add_option("--v", r_v, "hypothesis unitary file")->required();
  risk_cmd->add_option("--observable", r_obs, "observable spec")->capture_default_str();
  risk_cmd->add_option("--n", r_n, "qubit count (for specs that need it)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    std::ofstream out_file;
    if (haar_cmd->parsed()) {
      std::ostream& out = open_out(out_file, out_path);
      const double max_z = qdl::run_haar_check(out, hc_n, hc_samples, seed);
      std::cerr << "haar-check max |z| = " << max_z << "\n";
      return max_z > 5.0 ? kExitVerification : kExitOk;
    }
    if (bounds_cmd->parsed()) {
      std::vector<bool> flags;
      if (b_aligned == "both") flags = {true, false};
      else if (b_aligned == "true") flags = {true};
      else if (b_aligned == "false") flags = {false};
      else throw qdl::UsageError("bounds: --aligned must be true|false|both");
      qdl::Independence mode;
      if (b_mode == "independent") mode = qdl::Independence::INDEPENDENT;
      else if (b_mode == "dependent") mode = qdl::Independence::DEPENDENT;
      else throw qdl::UsageError("bounds: --mode must be independent|dependent");
      std::ostream& out = open_out(out_file, out_path);
      qdl::run_bounds(out, qdl::protocol_from_string(b_protocol), b_n,
                      parse_n_list(b_nlist), b_obs, flags, mode);
      return kExitOk;
    }
    if (sweep_cmd->parsed()) {
      qdl::ExperimentConfig cfg = qdl::parse_config_file(sweep_config);
      if (seed_given) cfg.seed = seed;
      const std::string path = out_path.empty() ? cfg.output_path : out_path;
      qdl::run_sweep(cfg, path, threads, timings_path);
      return kExitOk;
    }
    if (verify_cmd->parsed()) {
      std::ostream& out = open_out(out_file, out_path);
      const auto res = qdl::run_oracle_verify(
          out, qdl::protocol_from_string(v_protocol), v_n, v_N,
          qdl::family_from_string(v_family), v_obs, v_trials, seed, threads);
      std::cout << (res.pass ? "PASS" : "FAIL") << " mean=" << res.estimate.mean
                << " stderr=" << res.estimate.standard_error
                << " bound=" << res.bound.value << "\n";
      return res.pass ? kExitOk : kExitVerification;
    }
    if (train_cmd->parsed()) {
      const auto protocol = qdl::protocol_from_string(t_protocol);
      const qdl::Observable obs = qdl::parse_observable(t_obs, t_n);
      qdl::SeededRng rng(seed);
      const qdl::Matrix U = qdl::haar_unitary(1 << t_n, rng);
      const auto states =
          qdl::gen_states({qdl::family_from_string(t_family), t_n, t_N}, rng);
      const qdl::Dataset ds = qdl::gen_dataset(protocol, U, states, &obs);
      qdl::AdamConfig adam;
      adam.learning_rate = t_eta;
      adam.max_iterations = t_iters;
      adam.target_loss = t_target;
      adam.trace_stride = t_stride;
      qdl::ParamCircuit circuit = qdl::build_hea(t_n, t_layers, rng);
      auto [trained, trace] = qdl::train(protocol, ds, circuit, adam, &obs, nullptr);
      if (!t_trace.empty()) {
        std::ofstream tf(t_trace, std::ios::trunc);
        if (!tf) throw qdl::IoError("cannot write trace file '" + t_trace + "'");
        tf << "iteration,loss\n";
        tf.precision(17);
        for (const auto& [it, loss] : trace.loss_history) tf << it << ',' << loss << "\n";
      }
      const auto risk = qdl::analytical_risk(U, qdl::as_matrix(trained), obs);
      std::ostream& out = open_out(out_file, out_path);
      out << "converged=" << (trace.converged ? 1 : 0)
          << " final_loss=" << trace.final_loss
          << " iterations=" << trace.iterations_used << " risk=" << risk.risk
          << " normalized_risk=" << risk.normalized_risk << "\n";
      return kExitOk;
    }
    if (risk_cmd->parsed()) {
      const qdl::Matrix U = qdl::load_matrix(r_u);
      const qdl::Matrix V = qdl::load_matrix(r_v);
      if (r_n == 0) {
        int d = static_cast<int>(U.rows());
        while ((1 << r_n) < d) ++r_n;
      }
      const qdl::Observable obs = qdl::parse_observable(r_obs, r_n);
      if (!qdl::is_unitary(U, 1e-8) || !qdl::is_unitary(V, 1e-8))
        throw qdl::UsageError("risk: inputs must be unitary matrices");
      const auto report = qdl::analytical_risk(U, V, obs);
      std::ostream& out = open_out(out_file, out_path);
      out << "risk=" << report.risk << " trace_term=" << report.trace_term
          << " d=" << report.d << " normalized_risk=" << report.normalized_risk
          << "\n";
      return kExitOk;
    }
  } catch (const qdl::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qdl::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
