#include <immintrin.h>

#include "serrematch/kernels.hpp"

namespace serrematch {

namespace {

// Inverse of odd p modulo 2^32 (Newton iteration).
std::uint32_t inverse_mod_2_32(std::uint32_t p) {
  std::uint32_t inv = p;
  for (int i = 0; i < 4; ++i) inv *= 2u - p * inv;
  return inv;
}

}  // namespace

// Strategy: evaluate the degree-5 polynomial as six 32-bit multiply-adds per
// lane (sums stay below 2^32 for p <= 8191), then test divisibility by p with
// the multiplicative-inverse trick: for odd p, p | v iff v * p^{-1} mod 2^32
// lies in [0, floor((2^32 - 1)/p)].
std::uint64_t count_quintic_roots_avx2(const std::uint32_t c[6], const PowerTables& t) {
  const std::uint32_t p = t.p;
  const std::uint32_t pinv = inverse_mod_2_32(p);
  const std::uint32_t threshold = 0xFFFFFFFFu / p;

  const __m256i vc0 = _mm256_set1_epi32(static_cast<int>(c[0]));
  const __m256i vc1 = _mm256_set1_epi32(static_cast<int>(c[1]));
  const __m256i vc2 = _mm256_set1_epi32(static_cast<int>(c[2]));
  const __m256i vc3 = _mm256_set1_epi32(static_cast<int>(c[3]));
  const __m256i vc4 = _mm256_set1_epi32(static_cast<int>(c[4]));
  const __m256i vc5 = _mm256_set1_epi32(static_cast<int>(c[5]));
  const __m256i vpinv = _mm256_set1_epi32(static_cast<int>(pinv));
  const __m256i vthresh = _mm256_set1_epi32(static_cast<int>(threshold));

  __m256i xs = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const __m256i xstep = _mm256_set1_epi32(8);
  __m256i acc = _mm256_setzero_si256();

  std::uint32_t x = 0;
  for (; x + 8 <= p; x += 8) {
    __m256i v = vc0;
    v = _mm256_add_epi32(v, _mm256_mullo_epi32(vc1, xs));
    v = _mm256_add_epi32(v, _mm256_mullo_epi32(vc2, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(t.pw2.data() + x))));
    v = _mm256_add_epi32(v, _mm256_mullo_epi32(vc3, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(t.pw3.data() + x))));
    v = _mm256_add_epi32(v, _mm256_mullo_epi32(vc4, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(t.pw4.data() + x))));
    v = _mm256_add_epi32(v, _mm256_mullo_epi32(vc5, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(t.pw5.data() + x))));
    __m256i q = _mm256_mullo_epi32(v, vpinv);
    __m256i hit = _mm256_cmpeq_epi32(_mm256_min_epu32(q, vthresh), q);
    acc = _mm256_sub_epi32(acc, hit);
    xs = _mm256_add_epi32(xs, xstep);
  }

  alignas(32) std::uint32_t lanes[8];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t count = 0;
  for (auto lane : lanes) count += lane;

  for (; x < p; ++x) {
    std::uint64_t v = c[0] + static_cast<std::uint64_t>(c[1]) * x + static_cast<std::uint64_t>(c[2]) * t.pw2[x] +
                      static_cast<std::uint64_t>(c[3]) * t.pw3[x] + static_cast<std::uint64_t>(c[4]) * t.pw4[x] +
                      static_cast<std::uint64_t>(c[5]) * t.pw5[x];
    count += (v % p == 0);
  }
  return count;
}

}  // namespace serrematch
