#include <numeric>
#include <stdexcept>

#include "serrematch/modsym.hpp"

namespace serrematch {

namespace {

long long mod_pos(long long x, long long m) {
  long long r = x % m;
  return r < 0 ? r + m : r;
}

// Extended gcd: returns g and s with s*u + t*n = g.
long long xgcd(long long u, long long n, long long& s) {
  long long s0 = 1, s1 = 0, r0 = u, r1 = n;
  while (r1 != 0) {
    long long q = r0 / r1;
    long long r2 = r0 - q * r1;
    long long s2 = s0 - q * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  s = s0;
  return r0;
}

}  // namespace

std::pair<long, long> P1Table::normalize(long N, long c, long d) {
  if (N < 1) throw std::invalid_argument("P1Table::normalize: N must be positive");
  if (N == 1) return {0, 0};
  long long u = mod_pos(c, N);
  long long v = mod_pos(d, N);
  if (u == 0) {
    return std::gcd(v, static_cast<long long>(N)) == 1 ? std::pair<long, long>{0, 1} : std::pair<long, long>{-1, -1};
  }
  long long s;
  long long g = xgcd(u, N, s);
  if (std::gcd(g, v) != 1) return {-1, -1};
  s = mod_pos(s, N);
  long long ng = N / g;
  // Make the scalar a unit mod N; it already is one mod N/g.
  long guard = 0;
  while (std::gcd(s, static_cast<long long>(N)) != 1) {
    s = (s + ng) % N;
    if (++guard > N) throw std::logic_error("P1Table::normalize: no unit scalar found");
  }
  long long v2 = (v * s) % N;
  long long min_v = v2;
  if (g > 1) {
    // Minimize over the units fixing the first coordinate (w == 1 mod N/g).
    for (long long kk = 1; kk < g; ++kk) {
      long long w = (1 + kk * ng) % N;
      if (std::gcd(w, static_cast<long long>(N)) != 1) continue;
      long long cand = (v2 * w) % N;
      if (cand < min_v) min_v = cand;
    }
  }
  return {static_cast<long>(g), static_cast<long>(min_v)};
}

P1Table P1Table::build(long N) {
  if (N < 1) throw std::invalid_argument("P1Table::build: N must be positive");
  P1Table t;
  t.N_ = N;
  if (N == 1) {
    t.reps_.push_back({0, 0});
    t.lookup_[0] = 0;
    return t;
  }
  // Every class has a representative whose first coordinate is a divisor of N.
  for (long g = 1; g <= N; ++g) {
    if (N % g != 0) continue;
    for (long v = 0; v < N; ++v) {
      auto nf = normalize(N, g % N, v);
      if (nf.first < 0) continue;
      long long key = static_cast<long long>(nf.first) * (N + 1) + nf.second;
      if (t.lookup_.find(key) == t.lookup_.end()) {
        t.lookup_[key] = static_cast<long>(t.reps_.size());
        t.reps_.push_back(nf);
      }
    }
  }
  return t;
}

long P1Table::index(long c, long d) const {
  if (N_ == 1) return 0;
  auto nf = normalize(N_, c, d);
  if (nf.first < 0) return -1;
  long long key = static_cast<long long>(nf.first) * (N_ + 1) + nf.second;
  auto it = lookup_.find(key);
  if (it == lookup_.end()) throw std::logic_error("P1Table::index: normalized class missing from table");
  return it->second;
}

std::vector<Mat22> merel_matrices(long long n) {
  if (n < 1) throw std::invalid_argument("merel_matrices: n must be positive");
  std::vector<Mat22> out;
  for (long long a = 1; a <= n; ++a) {
    long long q = n / a;
    if (q * a == n) {
      long long d = q;
      for (long long b = 0; b < a; ++b) out.push_back({a, b, 0, d});
      for (long long c = 1; c < d; ++c) out.push_back({a, 0, c, d});
    }
    for (long long d = q + 1; d <= n; ++d) {
      long long bc = a * d - n;
      for (long long c = bc / a + 1; c < d; ++c) {
        if (bc % c == 0) out.push_back({a, bc / c, c, d});
      }
    }
  }
  return out;
}

}  // namespace serrematch
