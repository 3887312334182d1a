#pragma once

#include <cstdint>
#include <vector>

#include "serrematch/ffarith.hpp"

namespace serrematch {

// Precomputed tables of x^e mod p for the degree-5 evaluation loops.
struct PowerTables {
  std::uint32_t p = 0;
  std::vector<std::uint32_t> pw2, pw3, pw4, pw5;

  static PowerTables make(const Prime& p);
};

// Counts x in [0, p) with c0 + c1 x + c2 x^2 + ... + c5 x^5 == 0 (mod p).
// Coefficients must be reduced into [0, p).
using RootCountKernel = std::uint64_t (*)(const std::uint32_t c[6], const PowerTables& t);

// Reference kernel: plain 64-bit arithmetic with a real modulo per point.
std::uint64_t count_quintic_roots_scalar(const std::uint32_t c[6], const PowerTables& t);

#ifdef SERREMATCH_HAVE_AVX2
// 8-lane AVX2 kernel. Requires odd p <= 8191 (keeps lane sums below 2^32
// and makes p invertible mod 2^32 for the divisibility test).
std::uint64_t count_quintic_roots_avx2(const std::uint32_t c[6], const PowerTables& t);
#endif

bool cpu_supports_avx2();

// Runtime selection; falls back to the scalar kernel whenever the vector
// kernel's preconditions do not hold.
RootCountKernel select_root_count_kernel(std::uint32_t p);
const char* root_count_backend_name(std::uint32_t p);

}  // namespace serrematch
