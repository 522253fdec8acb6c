#include "rings/prf.hpp"

#include <cmath>

#include "rings/lattice.hpp"

namespace rings {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}
}  // namespace

Counter philox4x32(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint32_t purpose) {
  const Counter out = philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), purpose,
                                  tagged(StreamTag::seed_derivation, 0)},
                                 key_of(master));
  return low64(out);
}

std::uint64_t bernoulli_threshold(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability outside [0, 1]");
  return static_cast<std::uint64_t>(std::floor(std::ldexp(p, 53)));
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("below(0)");
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  for (;;) {
    const std::uint64_t u = (*this)();
    if (u <= limit) return u % bound;
  }
}

}  // namespace rings
