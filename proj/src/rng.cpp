/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qdl/rng.hpp"

namespace qdl {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  // Two mixed words so that (seed, stream) pairs map to well-separated
  // engine states even for small consecutive values.
  std::seed_seq seq{splitmix64(seed), splitmix64(stream ^ 0xD1B54A32D192ED03ULL),
                    seed, stream};
  engine_.seed(seq);
}

double SeededRng::uniform() { return unit_(engine_); }

double SeededRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double SeededRng::normal() { return normal_(engine_); }

std::uint64_t SeededRng::next_u64() { return engine_(); }

SeededRng derive_trial_rng(const SeededRng& master, std::uint64_t trial_index) {
  return SeededRng(master.seed(),
                   splitmix64(master.stream()) ^ splitmix64(trial_index + 1));
}

}  // namespace qdl
