#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "serrematch/counting.hpp"
#include "serrematch/modsym.hpp"

namespace serrematch {

// The quadratic character of Q(sqrt(d)), evaluated through the Kronecker
// symbol at the fundamental discriminant.
struct TwistCharacter {
  long long d = 1;
  long long D = 1;  // fundamental discriminant of Q(sqrt(d))
  long long conductor = 1;

  static TwistCharacter for_twist(long long d);
  int eval(const Prime& p) const;  // +-1 for p coprime to D, 0 otherwise
};

struct TwistedForm {
  std::map<std::uint64_t, long long> ap;  // p -> chi(p) * a_p(f), good p only
  long long level_bound = 1;              // level(f) * d^2 (bound, not exact)
};

TwistedForm twist_newform(const Newform& f, long long d, std::uint64_t prime_bound);

struct TwistReport {
  long long d = 1;
  std::vector<std::uint64_t> primes_checked;
  struct Failure {
    std::uint64_t p;
    std::uint64_t expected;  // chi(p) a_p(f) mod p
    std::uint64_t observed;  // 1 - #X_d(F_p) mod p
  };
  std::vector<Failure> failures;
  bool passed = false;
};

// Checks chi_D(p) a_p(f) == 1 - #X_d(F_p) (mod p) for primes p <= B with
// p not dividing 10d. Failures are data, not errors.
TwistReport verify_twist(long long d, std::uint64_t prime_bound, const Newform& f,
                         const CountFn& counts = direct_count_fn(), unsigned threads = 1);

}  // namespace serrematch
