#include "rings/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace rings::kernels {

namespace {

Backend initial_backend() {
  if (std::getenv("RINGS_FORCE_SCALAR") != nullptr) return Backend::scalar;
  return detect();
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

std::string_view name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool available(Backend b) {
  if (b == Backend::scalar) return true;
#if defined(RINGS_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend detect() { return available(Backend::avx2) ? Backend::avx2 : Backend::scalar; }

Backend active() { return current().load(std::memory_order_relaxed); }

void set_active(Backend b) {
  if (!available(b)) throw std::runtime_error("kernel backend not available on this CPU: " + std::string(name(b)));
  current().store(b, std::memory_order_relaxed);
}

void philox_bernoulli(std::span<const Counter> ctrs, Key key, std::uint64_t threshold, std::span<std::uint8_t> out) {
#if defined(RINGS_HAVE_AVX2)
  if (active() == Backend::avx2) return avx2::philox_bernoulli(ctrs, key, threshold, out);
#endif
  scalar::philox_bernoulli(ctrs, key, threshold, out);
}

std::int64_t masked_popcount_diff(std::span<const std::uint64_t> bits, std::span<const std::uint64_t> plus,
                                  std::span<const std::uint64_t> minus) {
#if defined(RINGS_HAVE_AVX2)
  if (active() == Backend::avx2) return avx2::masked_popcount_diff(bits, plus, minus);
#endif
  return scalar::masked_popcount_diff(bits, plus, minus);
}

void gather_bits(std::span<const std::uint64_t> src, std::span<const std::uint32_t> index, std::span<std::uint64_t> dst) {
#if defined(RINGS_HAVE_AVX2)
  if (active() == Backend::avx2) return avx2::gather_bits(src, index, dst);
#endif
  scalar::gather_bits(src, index, dst);
}

}  // namespace rings::kernels
