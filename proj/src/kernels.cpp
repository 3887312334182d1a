#include "serrematch/kernels.hpp"

namespace serrematch {

PowerTables PowerTables::make(const Prime& p) {
  PowerTables t;
  t.p = static_cast<std::uint32_t>(p.value());
  t.pw2 = power_table(p, 2);
  t.pw3 = power_table(p, 3);
  t.pw4 = power_table(p, 4);
  t.pw5 = power_table(p, 5);
  return t;
}

std::uint64_t count_quintic_roots_scalar(const std::uint32_t c[6], const PowerTables& t) {
  const std::uint64_t p = t.p;
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t v = c[0] + c[1] * x + static_cast<std::uint64_t>(c[2]) * t.pw2[x] +
                      static_cast<std::uint64_t>(c[3]) * t.pw3[x] + static_cast<std::uint64_t>(c[4]) * t.pw4[x] +
                      static_cast<std::uint64_t>(c[5]) * t.pw5[x];
    count += (v % p == 0);
  }
  return count;
}

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

RootCountKernel select_root_count_kernel(std::uint32_t p) {
#ifdef SERREMATCH_HAVE_AVX2
  if ((p & 1) != 0 && p <= 8191 && cpu_supports_avx2()) {
    return &count_quintic_roots_avx2;
  }
#endif
  (void)p;
  return &count_quintic_roots_scalar;
}

const char* root_count_backend_name(std::uint32_t p) {
#ifdef SERREMATCH_HAVE_AVX2
  if (select_root_count_kernel(p) == &count_quintic_roots_avx2) return "avx2";
#endif
  (void)p;
  return "scalar";
}

}  // namespace serrematch
