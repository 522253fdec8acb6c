#include <vector>

#include "doctest.h"
#include "rings/kernels.hpp"

using namespace rings;

namespace {

std::vector<std::uint64_t> random_words(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<std::uint64_t> w(n);
  for (auto& x : w) x = rng();
  return w;
}

}  // namespace

TEST_CASE("backend dispatch") {
  CHECK(kernels::available(kernels::Backend::scalar));
  const auto saved = kernels::active();
  kernels::set_active(kernels::Backend::scalar);
  CHECK(kernels::active() == kernels::Backend::scalar);
  kernels::set_active(saved);
}

#if defined(RINGS_HAVE_AVX2)
TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
  if (!kernels::available(kernels::Backend::avx2)) {
    MESSAGE("CPU lacks AVX2; equivalence not exercised");
    return;
  }
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 63u, 64u, 65u, 1000u, 4099u}) {
    CAPTURE(n);
    std::vector<Counter> ctrs(n);
    CounterRng rng(n + 1, 0);
    for (auto& c : ctrs) c = {static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng()), 0, 7};
    for (double p : {0.0, 0.1, 0.5, 0.999, 1.0}) {
      std::vector<std::uint8_t> a(n), b(n);
      kernels::scalar::philox_bernoulli(ctrs, {11, 22}, bernoulli_threshold(p), a);
      kernels::avx2::philox_bernoulli(ctrs, {11, 22}, bernoulli_threshold(p), b);
      CHECK(a == b);
    }

    const auto bits = random_words(n, 1);
    const auto plus = random_words(n, 2);
    auto minus = random_words(n, 3);
    for (std::size_t i = 0; i < n; ++i) minus[i] &= ~plus[i];
    CHECK(kernels::scalar::masked_popcount_diff(bits, plus, minus) ==
          kernels::avx2::masked_popcount_diff(bits, plus, minus));

    const std::size_t sites = n * 64 + 17;
    const auto src = random_words((sites + 63) / 64, 4);
    std::vector<std::uint32_t> index(sites);
    for (std::size_t i = 0; i < sites; ++i) index[i] = static_cast<std::uint32_t>((i * 2654435761u + 7) % sites);
    std::vector<std::uint64_t> da((sites + 63) / 64, ~0ull), db((sites + 63) / 64, 0);
    kernels::scalar::gather_bits(src, index, da);
    kernels::avx2::gather_bits(src, index, db);
    CHECK(da == db);
  }
}
#endif

TEST_CASE("scalar gather follows its index") {
  const std::vector<std::uint64_t> src{0b1011};
  const std::vector<std::uint32_t> index{3, 2, 1, 0};
  std::vector<std::uint64_t> dst(1, ~0ull);
  kernels::gather_bits(src, index, dst);
  CHECK(dst[0] == 0b1101);
}

TEST_CASE("scalar masked popcount") {
  const std::vector<std::uint64_t> bits{0xff, 0x0f};
  const std::vector<std::uint64_t> plus{0x03, 0x01};
  const std::vector<std::uint64_t> minus{0xf0, 0x00};
  CHECK(kernels::masked_popcount_diff(bits, plus, minus) == 3 - 4);
}
