/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <doctest.h>

#include <array>
#include <set>

#include "qdl/rng.hpp"

using namespace qdl;

TEST_CASE("identical (seed, stream) replays the same sequence") {
  SeededRng a(42, 3), b(42, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  SeededRng c(42, 3), d(42, 3);
  for (int i = 0; i < 20; ++i) {
    CHECK(c.uniform() == d.uniform());
    CHECK(c.normal() == d.normal());
  }
}

TEST_CASE("derived trial streams differ and replay") {
  SeededRng master(7);
  SeededRng t0 = derive_trial_rng(master, 0);
  SeededRng t1 = derive_trial_rng(master, 1);
  CHECK(t0.next_u64() != t1.next_u64());

  SeededRng a = derive_trial_rng(master, 3);
  SeededRng b = derive_trial_rng(master, 3);
  for (int i = 0; i < 50; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("1000 derived streams have no pairwise-identical prefixes") {
  SeededRng master(7);
  std::set<std::array<std::uint64_t, 4>> prefixes;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    SeededRng rng = derive_trial_rng(master, i);
    std::array<std::uint64_t, 4> p{rng.next_u64(), rng.next_u64(), rng.next_u64(),
                                   rng.next_u64()};
    CHECK(prefixes.insert(p).second);
  }
}

TEST_CASE("uniform range bounds") {
  SeededRng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(2.0, 5.0);
    CHECK(u >= 2.0);
    CHECK(u < 5.0);
  }
}
