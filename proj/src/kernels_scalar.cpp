#include <bit>

#include "rings/kernels.hpp"

namespace rings::kernels::scalar {

void philox_bernoulli(std::span<const Counter> ctrs, Key key, std::uint64_t threshold, std::span<std::uint8_t> out) {
  for (std::size_t j = 0; j < ctrs.size(); ++j) {
    out[j] = bernoulli_from(low64(philox4x32(ctrs[j], key)), threshold) ? 1 : 0;
  }
}

std::int64_t masked_popcount_diff(std::span<const std::uint64_t> bits, std::span<const std::uint64_t> plus,
                                  std::span<const std::uint64_t> minus) {
  std::int64_t acc = 0;
  for (std::size_t w = 0; w < bits.size(); ++w) {
    acc += std::popcount(bits[w] & plus[w]);
    acc -= std::popcount(bits[w] & minus[w]);
  }
  return acc;
}

void gather_bits(std::span<const std::uint64_t> src, std::span<const std::uint32_t> index, std::span<std::uint64_t> dst) {
  const std::size_t n = index.size();
  for (std::size_t w = 0; w < (n + 63) / 64; ++w) dst[w] = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const std::uint32_t s = index[x];
    const std::uint64_t b = (src[s >> 6] >> (s & 63)) & 1u;
    dst[x >> 6] |= b << (x & 63);
  }
}

}  // namespace rings::kernels::scalar
