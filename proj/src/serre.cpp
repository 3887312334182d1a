#include "serrematch/serre.hpp"

#include <algorithm>
#include <stdexcept>

namespace serrematch {

BadPrimeSet BadPrimeSet::make(const std::vector<std::uint64_t>& ps) {
  BadPrimeSet s;
  for (auto p : ps) {
    Prime checked(p);
    s.primes.insert(checked.value());
  }
  return s;
}

std::uint64_t level_bound(const BadPrimeSet& s) {
  std::uint64_t n0 = 1;
  for (auto p : s.primes) {
    unsigned e = (p == 2) ? 8 : (p == 3) ? 5 : 2;
    for (unsigned i = 0; i < e; ++i) {
      if (n0 > UINT64_MAX / p) throw std::overflow_error("level_bound: product exceeds 64 bits");
      n0 *= p;
    }
  }
  return n0;
}

SerreBounds rigid_bounds(const BadPrimeSet& s) { return SerreBounds{level_bound(s), 4}; }

NewformSource direct_newform_source() {
  return [](long N, long k, long coeff_bound) { return rational_newforms(N, k, coeff_bound); };
}

MatchResult match(const CompatibleSystemData& system, const SerreBounds& bounds, std::uint64_t prime_bound,
                  const MatchOptions& options) {
  if (prime_bound < 7) throw std::invalid_argument("match: prime bound must be >= 7");
  if (!system.trace_source) throw std::invalid_argument("match: missing trace source");

  MatchResult result;
  result.search_box = bounds;

  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p <= prime_bound; ++p) {
    if (is_prime_u64(p) && system.is_good(p)) primes.push_back(p);
  }
  result.primes_checked = primes;

  std::vector<FrobeniusData> traces;
  traces.reserve(primes.size());
  for (auto p : primes) {
    FrobeniusData fd = system.trace_source(Prime(p));
    long long expected_dp = 1;
    for (long i = 0; i < system.det_exponent; ++i) expected_dp *= static_cast<long long>(p);
    if (fd.d_p != expected_dp) {
      throw std::logic_error("match: trace source returned D_p != p^" + std::to_string(system.det_exponent) +
                             " at p=" + std::to_string(p));
    }
    traces.push_back(fd);
  }

  std::vector<std::uint64_t> divisors;
  for (std::uint64_t n = 1; n <= bounds.N0; ++n) {
    if (bounds.N0 % n == 0) divisors.push_back(n);
  }

  bool any_candidate = false;
  for (auto n : divisors) {
    for (long k = 2; k <= bounds.k0; k += 2) {
      long dim = dim_cusp_forms(static_cast<long>(n), k);
      if (dim == 0) continue;
      if (dim > options.dim_ceiling) {
        result.skipped.push_back("(" + std::to_string(n) + ", " + std::to_string(k) + ") dim " + std::to_string(dim));
        continue;
      }
      NewformDecomposition dec = options.newforms(static_cast<long>(n), k, static_cast<long>(prime_bound));
      for (auto& f : dec.forms) {
        any_candidate = true;
        // Determinant filter: D_p = p^{det_exponent} while the form imposes
        // D_p = p^{k-1}; different exponents can never match.
        if (k - 1 != system.det_exponent) continue;
        bool ok = true;
        for (std::size_t i = 0; i < primes.size(); ++i) {
          long long ap_form = f.a(static_cast<long>(primes[i]));
          const FrobeniusData& fd = traces[i];
          if (fd.mode == FrobeniusData::Mode::exact) {
            if (fd.a_p != ap_form) {
              ok = false;
              break;
            }
          } else {
            long long lp = static_cast<long long>(primes[i]);
            long long lhs = ((fd.a_p % lp) + lp) % lp;
            long long rhs = ((ap_form % lp) + lp) % lp;
            if (lhs != rhs) {
              ok = false;
              break;
            }
          }
        }
        if (ok) {
          result.matches.push_back({static_cast<long>(n), k, f.label, traces.empty() ? FrobeniusData::Mode::congruence : traces.front().mode, f});
        }
      }
    }
  }
  result.empty_search_box = !any_candidate;
  std::sort(result.matches.begin(), result.matches.end(), [](const MatchEntry& a, const MatchEntry& b) {
    return std::tie(a.level, a.weight, a.label) < std::tie(b.level, b.weight, b.label);
  });
  result.unique = result.matches.size() == 1;
  return result;
}

}  // namespace serrematch
