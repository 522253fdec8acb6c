#include <algorithm>
#include <vector>
#include <cmath>
#include <set>

#include "doctest.h"
#include "rings/prf.hpp"

using namespace rings;

TEST_CASE("philox4x32-10 known answers") {
  // Reference vectors distributed with Random123.
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("derived seeds depend on master, index and purpose only") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t master : {1ull, 2ull}) {
    for (std::uint64_t r = 0; r < 100; ++r) {
      for (std::uint32_t p : {0u, 7u}) seen.insert(derive_seed(master, r, p));
    }
  }
  CHECK(seen.size() == 400);
}

TEST_CASE("bernoulli threshold endpoints") {
  CHECK(bernoulli_threshold(0.0) == 0);
  CHECK(bernoulli_threshold(1.0) == (1ull << 53));
  CHECK(bernoulli_from(~0ull, bernoulli_threshold(1.0)));
  CHECK_FALSE(bernoulli_from(0, bernoulli_threshold(0.0)));
}

TEST_CASE("counter rng is a pure function of its stream") {
  CounterRng a(42, 3), b(42, 3), c(42, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs = differs || x != c();
  }
  CHECK(differs);
}

TEST_CASE("below is uniform") {
  CounterRng rng(9, 0);
  const int bins = 7;
  const int draws = 70000;
  std::vector<int> count(bins);
  for (int i = 0; i < draws; ++i) ++count[static_cast<std::size_t>(rng.below(bins))];
  const double p = 1.0 / bins;
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (int k : count) CHECK(std::abs(k - draws * p) <= 4 * sigma);
  CHECK_THROWS(rng.below(0));
}
