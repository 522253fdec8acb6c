#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86,
// an AVX2 variant; the public entry points dispatch on the CPU at runtime.
// Variants are required to produce bit-identical results.

#include <cstdint>
#include <span>
#include <string_view>

#include "rings/prf.hpp"

namespace rings::kernels {

enum class Backend { scalar, avx2 };

std::string_view name(Backend b);
bool available(Backend b);
/// Best backend the running CPU supports.
Backend detect();
/// Backend used by the dispatching entry points. Defaults to detect(),
/// or scalar when the environment variable RINGS_FORCE_SCALAR is set.
Backend active();
void set_active(Backend b);

/// out[j] = Bernoulli bit of philox(ctrs[j], key) under `threshold`
/// (see bernoulli_threshold).
void philox_bernoulli(std::span<const Counter> ctrs, Key key, std::uint64_t threshold, std::span<std::uint8_t> out);

/// Sum over words of popcount(bits & plus) - popcount(bits & minus).
std::int64_t masked_popcount_diff(std::span<const std::uint64_t> bits, std::span<const std::uint64_t> plus,
                                  std::span<const std::uint64_t> minus);

/// dst bit x = src bit index[x] for x < index.size(). dst must hold
/// ceil(index.size() / 64) words; trailing bits of the last word are cleared.
void gather_bits(std::span<const std::uint64_t> src, std::span<const std::uint32_t> index, std::span<std::uint64_t> dst);

namespace scalar {
void philox_bernoulli(std::span<const Counter> ctrs, Key key, std::uint64_t threshold, std::span<std::uint8_t> out);
std::int64_t masked_popcount_diff(std::span<const std::uint64_t> bits, std::span<const std::uint64_t> plus,
                                  std::span<const std::uint64_t> minus);
void gather_bits(std::span<const std::uint64_t> src, std::span<const std::uint32_t> index, std::span<std::uint64_t> dst);
}  // namespace scalar

#if defined(RINGS_HAVE_AVX2)
namespace avx2 {
void philox_bernoulli(std::span<const Counter> ctrs, Key key, std::uint64_t threshold, std::span<std::uint8_t> out);
std::int64_t masked_popcount_diff(std::span<const std::uint64_t> bits, std::span<const std::uint64_t> plus,
                                  std::span<const std::uint64_t> minus);
void gather_bits(std::span<const std::uint64_t> src, std::span<const std::uint32_t> index, std::span<std::uint64_t> dst);
}  // namespace avx2
#endif

}  // namespace rings::kernels
