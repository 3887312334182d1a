#include <doctest.h>

#include <map>

#include "serrematch/twist.hpp"

using namespace serrematch;

namespace {

std::uint64_t memo_count(long long d, const Prime& p) {
  static std::map<std::pair<long long, std::uint64_t>, std::uint64_t> memo;
  auto key = std::make_pair(d, p.value());
  auto it = memo.find(key);
  if (it == memo.end()) it = memo.emplace(key, count_projective(schoen_form(d), p)).first;
  return it->second;
}

const Newform& base_form() {
  static NewformDecomposition dec = rational_newforms(25, 4, 50);
  REQUIRE(dec.forms.size() == 1);
  return dec.forms.front();
}

}  // namespace

TEST_CASE("fundamental discriminants") {
  CHECK(TwistCharacter::for_twist(1).D == 1);
  CHECK(TwistCharacter::for_twist(2).D == 8);
  CHECK(TwistCharacter::for_twist(3).D == 12);
  CHECK(TwistCharacter::for_twist(5).D == 5);
  CHECK(TwistCharacter::for_twist(-1).D == -4);
  CHECK(TwistCharacter::for_twist(-3).D == -3);
  CHECK(TwistCharacter::for_twist(-1).conductor == 4);
  CHECK_THROWS_AS(TwistCharacter::for_twist(0), std::invalid_argument);
  CHECK_THROWS_AS(TwistCharacter::for_twist(12), std::invalid_argument);
}

TEST_CASE("trivial twist leaves coefficients and level unchanged") {
  const Newform& f = base_form();
  TwistedForm tw = twist_newform(f, 1, 30);
  CHECK(tw.level_bound == f.level);
  for (const auto& [p, ap] : tw.ap) CHECK(ap == f.a(static_cast<long>(p)));
}

TEST_CASE("twist by -1 flips a_3") {
  const Newform& f = base_form();
  CHECK(kronecker(-4, 3) == -1);
  TwistedForm tw = twist_newform(f, -1, 30);
  CHECK(tw.ap.at(3) == -f.a(3));
  CHECK(tw.level_bound == f.level * 1);  // d^2 = 1
}

TEST_CASE("double twist restores the original coefficients") {
  const Newform& f = base_form();
  for (long long d : {-1LL, 2LL, 3LL, -3LL}) {
    TwistCharacter chi = TwistCharacter::for_twist(d);
    TwistedForm tw = twist_newform(f, d, 40);
    CHECK(tw.level_bound == f.level * d * d);
    for (const auto& [p, ap] : tw.ap) {
      int c = chi.eval(Prime(p));
      CHECK((c == 1 || c == -1));
      CHECK(c * ap == f.a(static_cast<long>(p)));
      CHECK(std::llabs(ap) == std::llabs(f.a(static_cast<long>(p))));
    }
  }
}

TEST_CASE("twist verification passes for small twists") {
  const Newform& f = base_form();
  for (long long d : {1LL, 2LL, -1LL}) {
    TwistReport report = verify_twist(d, 30, f, memo_count);
    CHECK(report.passed);
    CHECK(report.failures.empty());
    CHECK(report.primes_checked.size() >= 7);
  }
}

TEST_CASE("identity twist report equals the base congruence suite") {
  const Newform& f = base_form();
  TwistReport report = verify_twist(1, 30, f, memo_count);
  for (auto pv : report.primes_checked) {
    Prime p(pv);
    Residue r = trace_congruence(1, p, memo_count);
    long long lp = static_cast<long long>(pv);
    long long expected = ((f.a(static_cast<long>(pv)) % lp) + lp) % lp;
    CHECK(static_cast<long long>(r.value) == expected);
  }
  CHECK(report.passed);
}

TEST_CASE("threaded twist verification matches sequential") {
  const Newform& f = base_form();
  TwistReport seq = verify_twist(2, 20, f, memo_count, 1);
  TwistReport par = verify_twist(2, 20, f, memo_count, 4);
  CHECK(seq.passed == par.passed);
  CHECK(seq.primes_checked == par.primes_checked);
  CHECK(seq.failures.size() == par.failures.size());
}

TEST_CASE("bad twist parameters are rejected") {
  const Newform& f = base_form();
  CHECK_THROWS_AS(verify_twist(0, 30, f, memo_count), std::invalid_argument);
  CHECK_THROWS_AS(verify_twist(8, 30, f, memo_count), std::invalid_argument);
}
