#include <immintrin.h>

#include "rings/kernels.hpp"

namespace rings::kernels::avx2 {

namespace {

inline __m256i mulhilo(__m256i a, __m256i m, __m256i& hi) {
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
  return _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
}

// Eight Philox4x32-10 blocks, one per lane; c0..c3 are the counter words.
inline void philox_x8(__m256i& c0, __m256i& c1, __m256i& c2, __m256i& c3, Key key) {
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(0xD2511F53u));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(0xCD9E8D57u));
  std::uint32_t k0 = key[0];
  std::uint32_t k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    __m256i hi0, hi1;
    const __m256i lo0 = mulhilo(c0, m0, hi0);
    const __m256i lo1 = mulhilo(c2, m1, hi1);
    const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), _mm256_set1_epi32(static_cast<int>(k0)));
    const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), _mm256_set1_epi32(static_cast<int>(k1)));
    c0 = n0;
    c1 = lo1;
    c2 = n2;
    c3 = lo0;
  }
}

inline __m256i popcount_bytes(__m256i v) {
  const __m256i kNibblePop = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3,
                                              1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(kNibblePop, lo), _mm256_shuffle_epi8(kNibblePop, hi));
}

// Header inline helpers are not called from this translation unit so that no
// AVX2-compiled copy of a shared inline function can be picked by the linker.
inline bool below_threshold(std::uint32_t w0, std::uint32_t w1, std::uint64_t threshold) {
  return ((((static_cast<std::uint64_t>(w1) << 32) | w0)) >> 11) < threshold;
}

}  // namespace

void philox_bernoulli(std::span<const Counter> ctrs, Key key, std::uint64_t threshold, std::span<std::uint8_t> out) {
  const std::size_t n = ctrs.size();
  const auto* base = reinterpret_cast<const int*>(ctrs.data());
  const __m256i stride = _mm256_setr_epi32(0, 4, 8, 12, 16, 20, 24, 28);
  alignas(32) std::uint32_t w0[8];
  alignas(32) std::uint32_t w1[8];
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    const int* p = base + 4 * j;
    __m256i c0 = _mm256_i32gather_epi32(p, stride, 4);
    __m256i c1 = _mm256_i32gather_epi32(p + 1, stride, 4);
    __m256i c2 = _mm256_i32gather_epi32(p + 2, stride, 4);
    __m256i c3 = _mm256_i32gather_epi32(p + 3, stride, 4);
    philox_x8(c0, c1, c2, c3, key);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w0), c0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w1), c1);
    for (int lane = 0; lane < 8; ++lane) {
      out[j + static_cast<std::size_t>(lane)] = below_threshold(w0[lane], w1[lane], threshold) ? 1 : 0;
    }
  }
  for (; j < n; ++j) {
    const Counter r = philox4x32(ctrs[j], key);
    out[j] = below_threshold(r[0], r[1], threshold) ? 1 : 0;
  }
}

std::int64_t masked_popcount_diff(std::span<const std::uint64_t> bits, std::span<const std::uint64_t> plus,
                                  std::span<const std::uint64_t> minus) {
  const std::size_t n = bits.size();
  __m256i acc_plus = _mm256_setzero_si256();
  __m256i acc_minus = _mm256_setzero_si256();
  const __m256i zero = _mm256_setzero_si256();
  std::size_t w = 0;
  for (; w + 4 <= n; w += 4) {
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bits.data() + w));
    const __m256i p = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(plus.data() + w));
    const __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(minus.data() + w));
    acc_plus = _mm256_add_epi64(acc_plus, _mm256_sad_epu8(popcount_bytes(_mm256_and_si256(b, p)), zero));
    acc_minus = _mm256_add_epi64(acc_minus, _mm256_sad_epu8(popcount_bytes(_mm256_and_si256(b, m)), zero));
  }
  alignas(32) std::int64_t lanes_plus[4];
  alignas(32) std::int64_t lanes_minus[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes_plus), acc_plus);
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes_minus), acc_minus);
  std::int64_t acc = 0;
  for (int l = 0; l < 4; ++l) acc += lanes_plus[l] - lanes_minus[l];
  for (; w < n; ++w) {
    acc += __builtin_popcountll(bits[w] & plus[w]);
    acc -= __builtin_popcountll(bits[w] & minus[w]);
  }
  return acc;
}

void gather_bits(std::span<const std::uint64_t> src, std::span<const std::uint32_t> index, std::span<std::uint64_t> dst) {
  const std::size_t n = index.size();
  const auto* src32 = reinterpret_cast<const int*>(src.data());
  for (std::size_t w = 0; w < (n + 63) / 64; ++w) dst[w] = 0;
  const __m256i low5 = _mm256_set1_epi32(31);
  std::size_t x = 0;
  for (; x + 8 <= n; x += 8) {
    const __m256i idx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(index.data() + x));
    const __m256i word = _mm256_srli_epi32(idx, 5);
    const __m256i bit = _mm256_and_si256(idx, low5);
    const __m256i g = _mm256_i32gather_epi32(src32, word, 4);
    const __m256i top = _mm256_slli_epi32(_mm256_srlv_epi32(g, bit), 31);
    const auto mask = static_cast<std::uint64_t>(_mm256_movemask_ps(_mm256_castsi256_ps(top)));
    dst[x >> 6] |= mask << (x & 63);
  }
  for (; x < n; ++x) {
    const std::uint32_t s = index[x];
    dst[x >> 6] |= ((src[s >> 6] >> (s & 63)) & 1u) << (x & 63);
  }
}

}  // namespace rings::kernels::avx2
