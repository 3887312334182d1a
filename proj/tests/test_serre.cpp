#include <doctest.h>

#include <set>

#include "serrematch/serre.hpp"

using namespace serrematch;

namespace {

CompatibleSystemData self_match_system(const Newform& f) {
  CompatibleSystemData sys;
  std::vector<std::uint64_t> bad;
  for (long q = 2; q <= f.level; ++q) {
    if (f.level % q == 0 && is_prime_u64(static_cast<std::uint64_t>(q))) bad.push_back(static_cast<std::uint64_t>(q));
  }
  sys.S = BadPrimeSet::make(bad);
  sys.det_exponent = f.weight - 1;
  sys.trace_source = [f](const Prime& p) {
    long long dp = 1;
    for (long i = 0; i < f.weight - 1; ++i) dp *= static_cast<long long>(p.value());
    return FrobeniusData{p, f.a(static_cast<long>(p.value())), dp, FrobeniusData::Mode::exact};
  };
  return sys;
}

}  // namespace

TEST_CASE("level bound exponent table") {
  CHECK(level_bound(BadPrimeSet::make({})) == 1);
  CHECK(level_bound(BadPrimeSet::make({5})) == 25);
  CHECK(level_bound(BadPrimeSet::make({2, 3, 7})) == 3048192);
  CHECK(level_bound(BadPrimeSet::make({2})) == 256);
  CHECK(level_bound(BadPrimeSet::make({3})) == 243);
  CHECK_THROWS_AS(BadPrimeSet::make({6}), std::invalid_argument);
}

TEST_CASE("level bound is multiplicative over disjoint prime sets") {
  auto s1 = BadPrimeSet::make({2, 7});
  auto s2 = BadPrimeSet::make({3, 11});
  auto s12 = BadPrimeSet::make({2, 3, 7, 11});
  CHECK(level_bound(s12) == level_bound(s1) * level_bound(s2));
}

TEST_CASE("rigid bounds instantiate weight 4") {
  CHECK(rigid_bounds(BadPrimeSet::make({5})) == SerreBounds{25, 4});
  CHECK(rigid_bounds(BadPrimeSet::make({})) == SerreBounds{1, 4});
  CHECK(rigid_bounds(BadPrimeSet::make({2})) == SerreBounds{256, 4});
}

TEST_CASE("self-match round trip at (11, 2)") {
  NewformDecomposition dec = rational_newforms(11, 2, 60);
  REQUIRE(dec.forms.size() == 1);
  const Newform& f = dec.forms.front();
  CompatibleSystemData sys = self_match_system(f);
  MatchResult r = match(sys, SerreBounds{11, 2}, 50);
  CHECK(r.unique);
  REQUIRE(r.matches.size() == 1);
  CHECK(r.matches.front().level == 11);
  CHECK(r.matches.front().weight == 2);
  CHECK(r.matches.front().label == f.label);
  // Audit: no comparison at bad primes or beyond the bound.
  for (auto p : r.primes_checked) {
    CHECK(p <= 50);
    CHECK(p != 11);
  }
}

TEST_CASE("perturbed trace data matches nothing") {
  NewformDecomposition dec = rational_newforms(11, 2, 60);
  const Newform& f = dec.forms.front();
  CompatibleSystemData sys = self_match_system(f);
  auto base = sys.trace_source;
  sys.trace_source = [base](const Prime& p) {
    FrobeniusData fd = base(p);
    if (p.value() == 7) fd.a_p += 1;
    return fd;
  };
  MatchResult r = match(sys, SerreBounds{11, 2}, 50);
  CHECK(r.matches.empty());
  CHECK_FALSE(r.unique);
}

TEST_CASE("weight mismatch is eliminated structurally") {
  NewformDecomposition dec = rational_newforms(11, 2, 60);
  const Newform& f = dec.forms.front();
  CompatibleSystemData sys = self_match_system(f);
  sys.det_exponent = 3;  // claims D_p = p^3, so no weight-2 form can match
  sys.trace_source = [f](const Prime& p) {
    long long dp = static_cast<long long>(p.value());
    dp = dp * dp * dp;
    return FrobeniusData{p, f.a(static_cast<long>(p.value())), dp, FrobeniusData::Mode::exact};
  };
  MatchResult r = match(sys, SerreBounds{11, 2}, 50);
  CHECK(r.matches.empty());
}

TEST_CASE("empty search box is reported, not fatal") {
  NewformDecomposition dec = rational_newforms(11, 2, 60);
  CompatibleSystemData sys = self_match_system(dec.forms.front());
  sys.S = BadPrimeSet::make({});
  MatchResult r = match(sys, SerreBounds{1, 2}, 20);
  CHECK(r.matches.empty());
  CHECK(r.empty_search_box);
  CHECK_FALSE(r.unique);
}

TEST_CASE("match requires a sensible prime bound") {
  NewformDecomposition dec = rational_newforms(11, 2, 60);
  CompatibleSystemData sys = self_match_system(dec.forms.front());
  CHECK_THROWS_AS(match(sys, SerreBounds{11, 2}, 5), std::invalid_argument);
}
