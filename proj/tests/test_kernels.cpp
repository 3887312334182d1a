#include <doctest.h>

#include <random>

#include "serrematch/kernels.hpp"

using namespace serrematch;

namespace {

std::uint64_t count_naive(const std::uint32_t c[6], std::uint64_t p) {
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t v = 0;
    for (int e = 5; e >= 0; --e) v = (v * x + c[e]) % p;
    count += (v == 0);
  }
  return count;
}

}  // namespace

TEST_CASE("scalar kernel matches naive Horner evaluation") {
  std::mt19937_64 rng(42);
  for (auto pv : {2ull, 3ull, 5ull, 7ull, 11ull, 97ull, 101ull, 8191ull}) {
    Prime p(pv);
    PowerTables t = PowerTables::make(p);
    for (int trial = 0; trial < 20; ++trial) {
      std::uint32_t c[6];
      for (auto& x : c) x = static_cast<std::uint32_t>(rng() % pv);
      CHECK(count_quintic_roots_scalar(c, t) == count_naive(c, pv));
    }
  }
}

#ifdef SERREMATCH_HAVE_AVX2
TEST_CASE("avx2 kernel is equivalent to the scalar reference") {
  if (!cpu_supports_avx2()) {
    MESSAGE("AVX2 not available on this host; skipping equivalence test");
    return;
  }
  std::mt19937_64 rng(4242);
  std::vector<std::uint64_t> primes{3, 5, 7, 11, 13, 31, 97, 101, 641, 4099, 8191};
  for (auto pv : primes) {
    Prime p(pv);
    PowerTables t = PowerTables::make(p);
    for (int trial = 0; trial < 40; ++trial) {
      std::uint32_t c[6];
      for (auto& x : c) x = static_cast<std::uint32_t>(rng() % pv);
      CHECK(count_quintic_roots_avx2(c, t) == count_quintic_roots_scalar(c, t));
    }
    // Degenerate coefficient patterns.
    std::uint32_t zeros[6] = {0, 0, 0, 0, 0, 0};
    CHECK(count_quintic_roots_avx2(zeros, t) == pv);
    std::uint32_t ones[6] = {1, 0, 0, 0, 0, 0};
    CHECK(count_quintic_roots_avx2(ones, t) == 0);
  }
}

TEST_CASE("kernel dispatch prefers avx2 only within its preconditions") {
  if (!cpu_supports_avx2()) return;
  CHECK(select_root_count_kernel(97) == &count_quintic_roots_avx2);
  CHECK(select_root_count_kernel(2) == &count_quintic_roots_scalar);      // even p
  CHECK(select_root_count_kernel(16411) == &count_quintic_roots_scalar);  // beyond the overflow-safe range
}
#endif
