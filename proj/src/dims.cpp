#include <numeric>
#include <stdexcept>

#include "serrematch/ffarith.hpp"
#include "serrematch/modsym.hpp"

namespace serrematch {

namespace {

std::vector<long> prime_divisors(long N) {
  std::vector<long> ps;
  long n = N;
  for (long q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      ps.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

long euler_phi(long n) {
  long result = n;
  for (long p : prime_divisors(n)) result = result / p * (p - 1);
  return result;
}

}  // namespace

long psi_index(long N) {
  long psi = N;
  for (long p : prime_divisors(N)) psi = psi / p * (p + 1);
  return psi;
}

long nu2_count(long N) {
  if (N % 4 == 0) return 0;
  long prod = 1;
  for (long p : prime_divisors(N)) prod *= 1 + kronecker(-4, static_cast<std::uint64_t>(p));
  return prod;
}

long nu3_count(long N) {
  if (N % 9 == 0) return 0;
  long prod = 1;
  for (long p : prime_divisors(N)) prod *= 1 + kronecker(-3, static_cast<std::uint64_t>(p));
  return prod;
}

long nu_infinity(long N) {
  long total = 0;
  for (long d = 1; d <= N; ++d) {
    if (N % d == 0) total += euler_phi(std::gcd(d, N / d));
  }
  return total;
}

long genus_x0(long N) {
  long numerator = 12 + psi_index(N) - 3 * nu2_count(N) - 4 * nu3_count(N) - 6 * nu_infinity(N);
  if (numerator % 12 != 0) throw std::logic_error("genus_x0: formula did not yield an integer");
  return numerator / 12;
}

long dim_cusp_forms(long N, long k) {
  if (N < 1) throw std::invalid_argument("dim_cusp_forms: N must be positive");
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("dim_cusp_forms: weight must be even and >= 2");
  long g = genus_x0(N);
  if (k == 2) return g;
  return (k - 1) * (g - 1) + (k / 2 - 1) * nu_infinity(N) + (k / 4) * nu2_count(N) + (k / 3) * nu3_count(N);
}

}  // namespace serrematch
