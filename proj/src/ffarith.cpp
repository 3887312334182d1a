#include "serrematch/ffarith.hpp"

#include <numeric>

namespace serrematch {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for all n < 3.3 * 10^24, so in
  // particular for 64-bit inputs.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Prime::Prime(std::uint64_t value) : value_(value) {
  if (!is_prime_u64(value)) {
    throw std::invalid_argument("Prime: " + std::to_string(value) + " is not prime");
  }
}

int kronecker(std::int64_t d, std::uint64_t n) {
  if (d == 0) throw std::invalid_argument("kronecker: d must be nonzero");
  if (n == 0) throw std::invalid_argument("kronecker: n must be positive");
  int result = 1;
  // Split off the even part of n; (d/2) depends on d mod 8.
  if ((n & 1) == 0) {
    if ((d & 1) == 0) return 0;
    unsigned twos = 0;
    while ((n & 1) == 0) {
      n >>= 1;
      ++twos;
    }
    if (twos & 1) {
      std::int64_t d8 = ((d % 8) + 8) % 8;
      if (d8 == 3 || d8 == 5) result = -result;
    }
  }
  if (n == 1) return result;
  // Jacobi symbol (a/n) for odd n > 1, with a = d mod n >= 0.
  std::uint64_t a = static_cast<std::uint64_t>(((d % static_cast<std::int64_t>(n)) + static_cast<std::int64_t>(n)) %
                                               static_cast<std::int64_t>(n));
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      std::uint64_t n8 = n % 8;
      if (n8 == 3 || n8 == 5) result = -result;
    }
    std::swap(a, n);
    if ((a % 4 == 3) && (n % 4 == 3)) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::vector<std::uint32_t> power_table(const Prime& p, unsigned e) {
  if (e < 1) throw std::invalid_argument("power_table: exponent must be >= 1");
  std::uint64_t pv = p.value();
  if (pv > 0xFFFFFFFFull) throw std::invalid_argument("power_table: prime too large for table entries");
  std::vector<std::uint32_t> table(pv);
  for (std::uint64_t x = 0; x < pv; ++x) {
    table[x] = static_cast<std::uint32_t>(pow_mod(x, e, pv));
  }
  return table;
}

}  // namespace serrematch
