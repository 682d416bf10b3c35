/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QDL_RNG_HPP
#define QDL_RNG_HPP

#include <cstdint>
#include <random>

namespace qdl {

/// Deterministic random source. Identical (seed, stream) pairs replay the
/// same sample sequence, so parallel trials stay reproducible independent of
/// scheduling: give every concurrent task its own derived stream.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Uniform draw in [0, 1).
  double uniform();
  /// Uniform draw in [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal draw.
  double normal();
  /// Raw 64-bit draw (used by tests for stream-collision scans).
  std::uint64_t next_u64();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

/// Counter-based stream derivation: maps (master, trial-index) to an
/// independent-looking stream, injectively in the index.
SeededRng derive_trial_rng(const SeededRng& master, std::uint64_t trial_index);

/// SplitMix64 finalizer, the mixing primitive behind stream derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qdl

#endif
