#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "serrematch/ffarith.hpp"
#include "serrematch/quintic.hpp"

namespace serrematch {

struct BadReductionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WeilBoundViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoConsistentModelError : std::runtime_error {
  explicit NoConsistentModelError(std::string msg, std::vector<std::string> residual_table)
      : std::runtime_error(std::move(msg)), residual_table(std::move(residual_table)) {}
  std::vector<std::string> residual_table;
};

struct ValidationFailureError : std::runtime_error {
  struct Entry {
    std::uint64_t p;
    int residue_class;
    std::string reason;
    long long residual;
  };
  ValidationFailureError(std::string msg, std::vector<Entry> failures)
      : std::runtime_error(std::move(msg)), failures(std::move(failures)) {}
  std::vector<Entry> failures;
};

struct CountRecord {
  std::string family;
  long long d;
  std::uint64_t p;
  std::uint64_t count;
  std::string version = "v1";
};

// #{x in P^4(F_p) : f(x) = 0}, by enumerating the five standard affine charts
// (p^4 + p^3 + p^2 + p + 1 evaluations). Chart slices are independent, so the
// dominant chart may be split across threads; the result is a plain sum and
// does not depend on the schedule.
std::uint64_t count_projective(const QuinticForm& f, const Prime& p, unsigned threads = 1);

using ProjPoint = std::array<std::uint32_t, 5>;

// All F_p-rational points where f and its five partial derivatives vanish,
// as normalized projective tuples (leading coordinate 1, earlier ones 0).
std::vector<ProjPoint> singular_points(const QuinticForm& f, const Prime& p);

// Pluggable count source so callers can route through a cache. The default
// computes directly.
using CountFn = std::function<std::uint64_t(long long d, const Prime& p)>;
CountFn direct_count_fn(unsigned threads = 1);

// (1 - #X_d(F_p)) mod p. For a nodal quintic with a smooth small resolution
// this residue equals a_p mod p for the attached weight-4 form: by the
// Lefschetz trace formula #Y(F_p) = 1 + tr H^2 + tr H^4 + p^3 - a_p with the
// middle terms divisible by p, and replacing each rational node by its
// exceptional fiber (a line or quadric, with 1 point mod p) changes the count
// by a multiple of p, so the singular model's count may be used directly.
Residue trace_congruence(long long d, const Prime& p, const CountFn& counts = direct_count_fn());

// Exact middle-cohomology trace data (p, A_p, D_p) with D_p = p^3.
struct FrobeniusData {
  enum class Mode { exact, congruence };
  Prime p;
  long long a_p;  // exact trace, or a residue in [0, p) in congruence mode
  long long d_p;
  Mode mode;
};

FrobeniusData frobenius_congruence(long long d, const Prime& p, const CountFn& counts = direct_count_fn());

// Integer corrections (c1, c2) per residue class of p mod 5, turning
// singular-model counts into exact traces via
//   A_p = 1 + c1 p + c2 p^2 + p^3 - (count + p * n_p),
// where n_p is the number of rational nodes. The class constants absorb the
// Frobenius traces on H^2 and H^4 of the small resolution.
struct CorrectionModel {
  struct ClassPair {
    bool present = false;
    int c1 = 0;
    int c2 = 0;
  };
  std::array<ClassPair, 5> by_class;  // indexed by p mod 5 (classes 1..4 used)
  std::vector<std::uint64_t> calibration_primes;
  std::vector<std::uint64_t> validation_primes;
};

// Fits bounded integer pairs on the calibration primes per class, then
// requires exact reproduction of the oracle on every validation prime.
// Residue classes that occur only in the validation list have no fitted
// constants; their primes are reported through ValidationFailureError.
CorrectionModel calibrate_correction(long long d, const std::map<std::uint64_t, long long>& oracle,
                                     const std::vector<std::uint64_t>& calibration_primes,
                                     const std::vector<std::uint64_t>& validation_primes,
                                     const CountFn& counts = direct_count_fn());

FrobeniusData trace_exact(long long d, const Prime& p, const CorrectionModel& model,
                          const CountFn& counts = direct_count_fn());

}  // namespace serrematch
