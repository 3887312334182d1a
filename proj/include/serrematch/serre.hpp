#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "serrematch/counting.hpp"
#include "serrematch/modsym.hpp"

namespace serrematch {

struct BadPrimeSet {
  std::set<std::uint64_t> primes;  // validated prime on insertion via make()

  static BadPrimeSet make(const std::vector<std::uint64_t>& ps);
};

// prod_{p in S} p^{e(p)} with e(2) = 8, e(3) = 5, e(p) = 2 otherwise.
std::uint64_t level_bound(const BadPrimeSet& s);

struct SerreBounds {
  std::uint64_t N0 = 1;
  long k0 = 2;

  friend bool operator==(const SerreBounds&, const SerreBounds&) = default;
};

// Search box for the rigid Calabi-Yau instantiation: weight 4, level
// dividing the bound above.
SerreBounds rigid_bounds(const BadPrimeSet& s);

// Frobenius data for a compatible system: characteristic polynomials
// X^2 - A_p X + D_p at good primes, with D_p = p^{det_exponent}.
struct CompatibleSystemData {
  BadPrimeSet S;
  std::set<std::uint64_t> undefined_primes;  // good reduction but no usable trace data
  std::function<FrobeniusData(const Prime&)> trace_source;
  long det_exponent = 3;

  bool is_good(std::uint64_t p) const { return !S.primes.count(p) && !undefined_primes.count(p); }
};

struct MatchEntry {
  long level;
  long weight;
  std::string label;
  FrobeniusData::Mode mode;
  Newform form;
};

struct MatchResult {
  SerreBounds search_box;
  std::vector<std::uint64_t> primes_checked;
  std::vector<MatchEntry> matches;
  bool unique = false;
  std::vector<std::string> skipped;  // (N, k) boxes skipped by the dimension ceiling
  bool empty_search_box = false;
};

using NewformSource = std::function<NewformDecomposition(long N, long k, long coeff_bound)>;
NewformSource direct_newform_source();

struct MatchOptions {
  long dim_ceiling = 200;
  NewformSource newforms = direct_newform_source();
};

// Serre's finite matching procedure: enumerate rational newforms of level
// dividing N0 and even weight <= k0, keep those whose a_p agree with the
// trace data at every good prime p <= B (exactly, or mod p in congruence
// mode). Weight-mismatched candidates (p^{k-1} != D_p as polynomials in p)
// are dropped without coefficient comparison.
MatchResult match(const CompatibleSystemData& system, const SerreBounds& bounds, std::uint64_t prime_bound,
                  const MatchOptions& options = {});

}  // namespace serrematch
