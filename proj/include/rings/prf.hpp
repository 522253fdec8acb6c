#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rings {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Pure function of (counter, key).
Counter philox4x32(Counter ctr, Key key);

inline Key key_of(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

inline std::uint64_t low64(const Counter& out) {
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

/// Domain-separation tags carried in the top half of counter word 3.
enum class StreamTag : std::uint32_t {
  edge = 1,
  seed_derivation = 2,
  occupation_init = 3,
  boundary = 4,
  walk = 5,
  start = 6,
};

inline std::uint32_t tagged(StreamTag tag, std::uint32_t low16) {
  return (static_cast<std::uint32_t>(tag) << 16) | (low16 & 0xffffu);
}

/// seed_r = PRF(master, r); replica r's stream never depends on the replica count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint32_t purpose = 0);

/// Bernoulli(p) as a comparison on the top 53 bits of a uniform 64-bit word:
/// bit = (u >> 11) < threshold. p = 1 maps to 2^53 so every draw succeeds.
std::uint64_t bernoulli_threshold(double p);

inline bool bernoulli_from(std::uint64_t u, std::uint64_t threshold) { return (u >> 11) < threshold; }

/// Counter-mode generator: block j of stream (key, stream) is
/// philox({j lo, j hi, stream lo, tag|stream hi}, key). Satisfies
/// UniformRandomBitGenerator and is cheap to fork by stream id.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream, StreamTag tag = StreamTag::walk)
      : key_(key_of(seed)), stream_(stream), tag_(tag) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const Counter out = philox4x32(
        {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
         static_cast<std::uint32_t>(stream_), tagged(tag_, static_cast<std::uint32_t>(stream_ >> 32))},
        key_);
    ++block_;
    spare_ = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    have_spare_ = true;
    return low64(out);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection (unbiased).
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t position() const { return block_; }

 private:
  Key key_;
  std::uint64_t stream_;
  StreamTag tag_;
  std::uint64_t block_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace rings
