#include "serrematch/counting.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>

#include "serrematch/kernels.hpp"

namespace serrematch {

namespace {

struct TermModP {
  ExponentVec e;
  std::uint32_t c;
};

std::vector<TermModP> reduce_terms(const QuinticForm::TermMap& terms, std::uint64_t p) {
  std::vector<TermModP> out;
  for (const auto& [e, c] : terms) {
    long long r = c % static_cast<long long>(p);
    if (r < 0) r += static_cast<long long>(p);
    if (r != 0) out.push_back({e, static_cast<std::uint32_t>(r)});
  }
  return out;
}

std::uint32_t pow_from_tables(std::uint32_t x, unsigned e, const PowerTables& t) {
  switch (e) {
    case 0: return 1;
    case 1: return x;
    case 2: return t.pw2[x];
    case 3: return t.pw3[x];
    case 4: return t.pw4[x];
    default: return t.pw5[x];
  }
}

std::uint32_t eval_terms_at(const std::vector<TermModP>& terms, const ProjPoint& pt, const PowerTables& t) {
  std::uint64_t v = 0;
  for (const auto& term : terms) {
    std::uint64_t m = term.c;
    for (int i = 0; i < 5; ++i) {
      if (term.e[i] != 0) m = m * pow_from_tables(pt[i], term.e[i], t) % t.p;
    }
    v += m;
  }
  return static_cast<std::uint32_t>(v % t.p);
}

// Terms of one affine chart (leading coordinate = 1, earlier ones = 0),
// bucketed by the exponent of the innermost coordinate x4.
struct ChartPlan {
  struct OuterTerm {
    std::uint32_t c;
    std::array<std::uint8_t, 3> e;  // exponents of the free outer coordinates
  };
  std::array<std::vector<OuterTerm>, 6> groups;
  int n_outer = 0;
};

ChartPlan make_chart_plan(const std::vector<TermModP>& terms, int chart) {
  ChartPlan plan;
  plan.n_outer = 3 - chart;
  for (const auto& term : terms) {
    bool alive = true;
    for (int i = 0; i < chart; ++i) {
      if (term.e[i] != 0) {
        alive = false;
        break;
      }
    }
    if (!alive) continue;
    ChartPlan::OuterTerm ot{term.c, {0, 0, 0}};
    for (int s = 0; s < plan.n_outer; ++s) ot.e[s] = term.e[chart + 1 + s];
    plan.groups[term.e[4]].push_back(ot);
  }
  return plan;
}

void inner_coefficients(const ChartPlan& plan, const std::array<std::uint32_t, 3>& outer, const PowerTables& t,
                        std::uint32_t c6[6]) {
  for (int k = 0; k < 6; ++k) {
    std::uint64_t acc = 0;
    for (const auto& ot : plan.groups[k]) {
      std::uint64_t m = ot.c;
      for (int s = 0; s < plan.n_outer; ++s) {
        if (ot.e[s] != 0) m = m * pow_from_tables(outer[s], ot.e[s], t) % t.p;
      }
      acc += m;
    }
    c6[k] = static_cast<std::uint32_t>(acc % t.p);
  }
}

// Counts zeros of f in the chart with x_chart = 1, x_i = 0 for i < chart,
// restricting the first free outer coordinate to [lo, hi).
std::uint64_t count_chart(const std::vector<TermModP>& terms, const PowerTables& t, int chart, std::uint32_t lo,
                          std::uint32_t hi, RootCountKernel kernel) {
  const std::uint32_t p = t.p;
  if (chart == 4) {
    // Single point (0:0:0:0:1); f evaluates there to the coefficient of x4^5.
    for (const auto& term : terms) {
      if (term.e == ExponentVec{0, 0, 0, 0, 5}) return 0;
    }
    return 1;
  }
  ChartPlan plan = make_chart_plan(terms, chart);
  std::uint64_t count = 0;
  std::array<std::uint32_t, 3> outer{0, 0, 0};
  std::uint32_t c6[6];
  if (plan.n_outer == 0) {
    inner_coefficients(plan, outer, t, c6);
    return kernel(c6, t);
  }
  for (outer[0] = lo; outer[0] < hi; ++outer[0]) {
    if (plan.n_outer == 1) {
      inner_coefficients(plan, outer, t, c6);
      count += kernel(c6, t);
      continue;
    }
    for (outer[1] = 0; outer[1] < p; ++outer[1]) {
      if (plan.n_outer == 2) {
        inner_coefficients(plan, outer, t, c6);
        count += kernel(c6, t);
        continue;
      }
      for (outer[2] = 0; outer[2] < p; ++outer[2]) {
        inner_coefficients(plan, outer, t, c6);
        count += kernel(c6, t);
      }
    }
  }
  return count;
}

}  // namespace

std::uint64_t count_projective(const QuinticForm& f, const Prime& p, unsigned threads) {
  const PowerTables tables = PowerTables::make(p);
  const std::vector<TermModP> terms = reduce_terms(f.terms(), p.value());
  const RootCountKernel kernel = select_root_count_kernel(tables.p);
  const std::uint32_t pv = tables.p;

  if (threads <= 1 || pv < 16) {
    std::uint64_t total = 0;
    for (int chart = 0; chart <= 4; ++chart) total += count_chart(terms, tables, chart, 0, pv, kernel);
    return total;
  }

  // Chart 0 dominates (p^4 of p^4 + p^3 + ... points); slice its leading
  // free coordinate. Remaining charts run on the calling thread.
  unsigned slices = std::min<std::uint32_t>(threads, pv);
  std::vector<std::future<std::uint64_t>> futures;
  futures.reserve(slices);
  for (unsigned s = 0; s < slices; ++s) {
    std::uint32_t lo = static_cast<std::uint32_t>(static_cast<std::uint64_t>(pv) * s / slices);
    std::uint32_t hi = static_cast<std::uint32_t>(static_cast<std::uint64_t>(pv) * (s + 1) / slices);
    futures.push_back(std::async(std::launch::async, [&, lo, hi] { return count_chart(terms, tables, 0, lo, hi, kernel); }));
  }
  std::uint64_t total = 0;
  for (int chart = 1; chart <= 4; ++chart) total += count_chart(terms, tables, chart, 0, pv, kernel);
  for (auto& fut : futures) total += fut.get();
  return total;
}

std::vector<ProjPoint> singular_points(const QuinticForm& f, const Prime& p) {
  const PowerTables tables = PowerTables::make(p);
  const std::uint32_t pv = tables.p;
  const std::vector<TermModP> fterms = reduce_terms(f.terms(), pv);

  std::array<std::vector<TermModP>, 5> partials;
  for (int i = 0; i < 5; ++i) {
    for (const auto& [e, c] : f.terms()) {
      if (e[i] == 0) continue;
      long long dc = (c % static_cast<long long>(pv)) * e[i] % static_cast<long long>(pv);
      if (dc < 0) dc += pv;
      if (dc == 0) continue;
      ExponentVec de = e;
      --de[i];
      partials[i].push_back({de, static_cast<std::uint32_t>(dc)});
    }
  }

  auto is_singular_at = [&](const ProjPoint& pt) {
    if (eval_terms_at(fterms, pt, tables) != 0) return false;
    for (int i = 0; i < 5; ++i) {
      if (eval_terms_at(partials[i], pt, tables) != 0) return false;
    }
    return true;
  };

  std::vector<ProjPoint> points;
  for (int chart = 0; chart <= 4; ++chart) {
    if (chart == 4) {
      ProjPoint pt{0, 0, 0, 0, 1};
      if (is_singular_at(pt)) points.push_back(pt);
      continue;
    }
    ChartPlan plan = make_chart_plan(fterms, chart);
    std::array<std::uint32_t, 3> outer{0, 0, 0};
    std::uint32_t c6[6];
    int n = plan.n_outer;
    std::array<std::uint32_t, 3> limit{n > 0 ? pv : 1, n > 1 ? pv : 1, n > 2 ? pv : 1};
    for (outer[0] = 0; outer[0] < limit[0]; ++outer[0]) {
      for (outer[1] = 0; outer[1] < limit[1]; ++outer[1]) {
        for (outer[2] = 0; outer[2] < limit[2]; ++outer[2]) {
          inner_coefficients(plan, outer, tables, c6);
          for (std::uint32_t x4 = 0; x4 < pv; ++x4) {
            std::uint64_t v = c6[0] + static_cast<std::uint64_t>(c6[1]) * x4 +
                              static_cast<std::uint64_t>(c6[2]) * tables.pw2[x4] +
                              static_cast<std::uint64_t>(c6[3]) * tables.pw3[x4] +
                              static_cast<std::uint64_t>(c6[4]) * tables.pw4[x4] +
                              static_cast<std::uint64_t>(c6[5]) * tables.pw5[x4];
            if (v % pv != 0) continue;
            ProjPoint pt{0, 0, 0, 0, 0};
            pt[chart] = 1;
            for (int s = 0; s < n; ++s) pt[chart + 1 + s] = outer[s];
            pt[4] = x4;
            if (is_singular_at(pt)) points.push_back(pt);
          }
        }
      }
    }
  }
  return points;
}

CountFn direct_count_fn(unsigned threads) {
  return [threads](long long d, const Prime& p) { return count_projective(schoen_form(d), p, threads); };
}

namespace {

void require_good_prime(long long d, const Prime& p) {
  std::uint64_t pv = p.value();
  if (pv == 2 || pv == 5) {
    throw BadReductionError("prime " + std::to_string(pv) + " is excluded for the Schoen family");
  }
  if (static_cast<std::uint64_t>(std::llabs(d)) % pv == 0) {
    throw BadReductionError("prime " + std::to_string(pv) + " divides the twist parameter " + std::to_string(d));
  }
}

long long pow3_checked(std::uint64_t p) {
  if (p > 2000000ull) throw std::invalid_argument("prime too large: p^3 exceeds the supported range");
  return static_cast<long long>(p * p * p);
}

}  // namespace

Residue trace_congruence(long long d, const Prime& p, const CountFn& counts) {
  if (d == 0 || !is_squarefree(d)) throw std::invalid_argument("trace_congruence: d must be squarefree and nonzero");
  require_good_prime(d, p);
  std::uint64_t pv = p.value();
  std::uint64_t cm = counts(d, p) % pv;
  std::uint64_t r = (1 + pv - cm) % pv;
  return Residue{r, p};
}

FrobeniusData frobenius_congruence(long long d, const Prime& p, const CountFn& counts) {
  Residue r = trace_congruence(d, p, counts);
  return FrobeniusData{p, static_cast<long long>(r.value), pow3_checked(p.value()), FrobeniusData::Mode::congruence};
}

CorrectionModel calibrate_correction(long long d, const std::map<std::uint64_t, long long>& oracle,
                                     const std::vector<std::uint64_t>& calibration_primes,
                                     const std::vector<std::uint64_t>& validation_primes, const CountFn& counts) {
  if (d == 0 || !is_squarefree(d)) throw std::invalid_argument("calibrate_correction: d must be squarefree and nonzero");
  if (calibration_primes.empty()) throw std::invalid_argument("calibrate_correction: empty calibration set");
  if (validation_primes.empty()) throw std::invalid_argument("calibrate_correction: empty validation set");

  // R_p = A_p - 1 - p^3 + count + p*n_p must equal c1*p + c2*p^2.
  auto residual_target = [&](std::uint64_t pv) {
    Prime p(pv);
    require_good_prime(d, p);
    auto it = oracle.find(pv);
    if (it == oracle.end()) throw std::invalid_argument("calibrate_correction: oracle undefined at p=" + std::to_string(pv));
    long long count = static_cast<long long>(counts(d, p));
    long long n_p = static_cast<long long>(singular_points(schoen_form(d), p).size());
    return it->second - 1 - pow3_checked(pv) + count + static_cast<long long>(pv) * n_p;
  };

  std::map<std::uint64_t, long long> target;
  for (auto pv : calibration_primes) target[pv] = residual_target(pv);
  for (auto pv : validation_primes) target[pv] = residual_target(pv);

  constexpr int kBound = 25;  // |c1|, |c2| bounded by the resolution's second Betti number

  std::array<std::vector<std::pair<int, int>>, 5> candidates;
  std::array<bool, 5> calibrated{};
  for (auto pv : calibration_primes) calibrated[pv % 5] = true;

  for (int r = 1; r <= 4; ++r) {
    if (!calibrated[r]) continue;
    for (int c1 = -kBound; c1 <= kBound; ++c1) {
      for (int c2 = -kBound; c2 <= kBound; ++c2) {
        bool ok = true;
        for (auto pv : calibration_primes) {
          if (pv % 5 != static_cast<std::uint64_t>(r)) continue;
          long long lp = static_cast<long long>(pv);
          if (c1 * lp + c2 * lp * lp != target[pv]) {
            ok = false;
            break;
          }
        }
        if (ok) candidates[r].emplace_back(c1, c2);
      }
    }
    if (candidates[r].empty()) {
      std::vector<std::string> table;
      for (auto pv : calibration_primes) {
        if (pv % 5 != static_cast<std::uint64_t>(r)) continue;
        table.push_back("p=" + std::to_string(pv) + " class=" + std::to_string(r) + " target=" + std::to_string(target[pv]));
      }
      throw NoConsistentModelError("no bounded integer pair fits residue class " + std::to_string(r), std::move(table));
    }
  }

  // Validation is hold-out only: it may reject calibrated pairs (and pick
  // among several pairs an under-determined class admits), never fit new ones.
  CorrectionModel model;
  model.calibration_primes = calibration_primes;
  model.validation_primes = validation_primes;
  std::vector<ValidationFailureError::Entry> failures;

  for (int r = 1; r <= 4; ++r) {
    std::vector<std::uint64_t> val_r;
    for (auto pv : validation_primes) {
      if (pv % 5 == static_cast<std::uint64_t>(r)) val_r.push_back(pv);
    }
    if (!calibrated[r]) {
      for (auto pv : val_r) {
        failures.push_back({pv, r, "residue class has no calibration primes", target[pv]});
      }
      continue;
    }
    std::vector<std::pair<int, int>> survivors;
    for (auto [c1, c2] : candidates[r]) {
      bool ok = true;
      for (auto pv : val_r) {
        long long lp = static_cast<long long>(pv);
        if (c1 * lp + c2 * lp * lp != target[pv]) {
          ok = false;
          break;
        }
      }
      if (ok) survivors.emplace_back(c1, c2);
    }
    if (survivors.empty()) {
      auto [c1, c2] = candidates[r].front();
      for (auto pv : val_r) {
        long long lp = static_cast<long long>(pv);
        failures.push_back({pv, r, "fitted pair fails hold-out", target[pv] - (c1 * lp + c2 * lp * lp)});
      }
      continue;
    }
    if (survivors.size() > 1) {
      throw NoConsistentModelError(
          "residue class " + std::to_string(r) + " is under-determined: several bounded pairs survive",
          {"class=" + std::to_string(r) + " candidates=" + std::to_string(survivors.size())});
    }
    model.by_class[r] = {true, survivors.front().first, survivors.front().second};
  }

  if (!failures.empty()) {
    throw ValidationFailureError("correction model failed hold-out validation", std::move(failures));
  }
  return model;
}

FrobeniusData trace_exact(long long d, const Prime& p, const CorrectionModel& model, const CountFn& counts) {
  if (d == 0 || !is_squarefree(d)) throw std::invalid_argument("trace_exact: d must be squarefree and nonzero");
  require_good_prime(d, p);
  std::uint64_t pv = p.value();
  const auto& cls = model.by_class[pv % 5];
  if (!cls.present) {
    throw std::invalid_argument("trace_exact: correction model has no constants for class " + std::to_string(pv % 5));
  }
  long long count = static_cast<long long>(counts(d, p));
  long long n_p = static_cast<long long>(singular_points(schoen_form(d), p).size());
  long long lp = static_cast<long long>(pv);
  long long a = 1 + cls.c1 * lp + cls.c2 * lp * lp + pow3_checked(pv) - (count + lp * n_p);
  __int128 lhs = static_cast<__int128>(a) * a;
  __int128 rhs = static_cast<__int128>(4) * lp * lp * lp;
  if (lhs > rhs) {
    throw WeilBoundViolationError("trace_exact: |A_p| exceeds 2 p^{3/2} at p=" + std::to_string(pv) +
                                  " (A_p=" + std::to_string(a) + ")");
  }
  long long residue = ((a % lp) + lp) % lp;
  if (static_cast<std::uint64_t>(residue) != trace_congruence(d, p, counts).value) {
    throw std::logic_error("trace_exact: congruence cross-check failed");
  }
  return FrobeniusData{p, a, pow3_checked(pv), FrobeniusData::Mode::exact};
}

}  // namespace serrematch
