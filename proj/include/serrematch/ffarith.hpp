#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace serrematch {

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// A validated prime. Construction runs the primality test.
class Prime {
 public:
  explicit Prime(std::uint64_t value);
  std::uint64_t value() const { return value_; }

  friend bool operator==(const Prime&, const Prime&) = default;
  friend auto operator<=>(const Prime&, const Prime&) = default;

 private:
  std::uint64_t value_;
};

// An element of F_p, value in [0, p).
struct Residue {
  std::uint64_t value;
  Prime modulus;
};

// Kronecker symbol (d/n) for d != 0, n >= 1. Completely multiplicative in n;
// equals the Legendre symbol at odd primes; (d/2) is 0 for even d and
// +-1 according to d mod 8 otherwise.
int kronecker(std::int64_t d, std::uint64_t n);

// Table of x^e mod p for x in [0, p).
std::vector<std::uint32_t> power_table(const Prime& p, unsigned e);

}  // namespace serrematch
