#include "serrematch/twist.hpp"

#include <cstdlib>
#include <future>
#include <stdexcept>

namespace serrematch {

TwistCharacter TwistCharacter::for_twist(long long d) {
  if (d == 0 || !is_squarefree(d)) throw std::invalid_argument("TwistCharacter: d must be squarefree and nonzero");
  TwistCharacter chi;
  chi.d = d;
  chi.D = (((d % 4) + 4) % 4 == 1) ? d : 4 * d;
  chi.conductor = std::llabs(chi.D);
  return chi;
}

int TwistCharacter::eval(const Prime& p) const { return kronecker(D, p.value()); }

TwistedForm twist_newform(const Newform& f, long long d, std::uint64_t prime_bound) {
  TwistCharacter chi = TwistCharacter::for_twist(d);
  TwistedForm out;
  out.level_bound = f.level * d * d;
  for (std::uint64_t p = 2; p <= prime_bound; ++p) {
    if (!is_prime_u64(p)) continue;
    if (static_cast<std::uint64_t>(chi.conductor) % p == 0) continue;
    if (static_cast<std::uint64_t>(f.level) % p == 0) continue;
    out.ap[p] = chi.eval(Prime(p)) * f.a(static_cast<long>(p));
  }
  return out;
}

TwistReport verify_twist(long long d, std::uint64_t prime_bound, const Newform& f, const CountFn& counts,
                         unsigned threads) {
  if (d == 0 || !is_squarefree(d)) throw std::invalid_argument("verify_twist: d must be squarefree and nonzero");
  TwistCharacter chi = TwistCharacter::for_twist(d);
  TwistReport report;
  report.d = d;
  std::uint64_t ad = static_cast<std::uint64_t>(std::llabs(d));
  for (std::uint64_t p = 2; p <= prime_bound; ++p) {
    if (!is_prime_u64(p)) continue;
    if (p == 2 || p == 5 || ad % p == 0) continue;
    report.primes_checked.push_back(p);
  }

  auto check_one = [&](std::uint64_t pv) -> std::pair<bool, TwistReport::Failure> {
    Prime p(pv);
    long long lp = static_cast<long long>(pv);
    long long tw = chi.eval(p) * f.a(static_cast<long>(pv));
    std::uint64_t expected = static_cast<std::uint64_t>(((tw % lp) + lp) % lp);
    std::uint64_t observed = trace_congruence(d, p, counts).value;
    return {expected == observed, {pv, expected, observed}};
  };

  if (threads <= 1 || report.primes_checked.size() <= 1) {
    for (auto pv : report.primes_checked) {
      auto [ok, failure] = check_one(pv);
      if (!ok) report.failures.push_back(failure);
    }
  } else {
    std::vector<std::future<std::pair<bool, TwistReport::Failure>>> futures;
    futures.reserve(report.primes_checked.size());
    for (auto pv : report.primes_checked) {
      futures.push_back(std::async(std::launch::async, check_one, pv));
    }
    for (auto& fut : futures) {
      auto [ok, failure] = fut.get();
      if (!ok) report.failures.push_back(failure);
    }
  }
  report.passed = report.failures.empty();
  return report;
}

}  // namespace serrematch
