#include <algorithm>
#include <map>
#include <stdexcept>

#include "serrematch/ffarith.hpp"
#include "serrematch/modsym.hpp"

namespace serrematch {

namespace {

// floor(2 * p^{(k-1)/2}) as an exact integer.
Int weil_bound(long long p, long k) {
  Int v;
  mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k - 1));
  v *= 4;
  Int root;
  mpz_sqrt(root.get_mpz_t(), v.get_mpz_t());
  return root;
}

Rat eval_poly(const std::vector<Rat>& coeffs, const Rat& x) {
  Rat acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<long long> integer_roots_in_weil_range(const std::vector<Rat>& cp, long long q, long k) {
  Int bound = weil_bound(q, k);
  long long b = bound.get_si();
  std::vector<long long> roots;
  for (long long r = -b; r <= b; ++r) {
    if (eval_poly(cp, Rat(r)) == 0) roots.push_back(r);
  }
  return roots;
}

long long rat_to_ll(const Rat& x, const char* what) {
  if (x.get_den() != 1) throw std::logic_error(std::string(what) + ": expected an integer, got a non-integral rational");
  if (!x.get_num().fits_slong_p()) throw std::logic_error(std::string(what) + ": integer out of 64-bit range");
  return x.get_num().get_si();
}

}  // namespace

NewformDecomposition rational_newforms(long N, long k, long coeff_bound) {
  if (coeff_bound < 2) throw std::invalid_argument("rational_newforms: coeff_bound must be >= 2");
  MSpace space = MSpace::build(N, k);
  Subspace news = space.new_subspace();
  NewformDecomposition out;
  if (news.dim() == 0) return out;

  std::map<long long, QMat> hecke_cache;
  auto hecke_full = [&](long long n) -> const QMat& {
    auto it = hecke_cache.find(n);
    if (it == hecke_cache.end()) it = hecke_cache.emplace(n, space.hecke_matrix(n)).first;
    return it->second;
  };

  std::vector<Subspace> layers;
  layers.push_back(std::move(news));
  std::vector<QMat> lines;

  int attempts = 0;
  long long q = 1;
  while (!layers.empty()) {
    do {
      ++q;
    } while (!is_prime_u64(static_cast<std::uint64_t>(q)) || N % q == 0);
    if (++attempts > 25) {
      throw std::runtime_error("rational_newforms: Hecke operators failed to separate eigenspaces after 25 primes");
    }
    std::vector<Subspace> next_layers;
    for (auto& v : layers) {
      if (v.dim() == 1) {
        lines.push_back(v.basis);
        continue;
      }
      QMat tv = restrict_operator(hecke_full(q), v);
      std::vector<Rat> cp = charpoly(tv);
      std::size_t used = 0;
      for (long long r : integer_roots_in_weil_range(cp, q, k)) {
        QMat shifted = tv;
        for (std::size_t i = 0; i < shifted.rows(); ++i) shifted.at(i, i) -= Rat(r);
        QMat kern = kernel_basis(shifted);
        if (kern.cols() == 0) continue;
        used += kern.cols();
        if (kern.cols() == v.dim()) {
          // T_q acts as the scalar r; no information from this prime.
          next_layers.push_back(v);
          break;
        }
        Subspace w = subspace_from_columns(*v.space, mat_mul(v.basis, kern));
        if (w.dim() == 1) {
          lines.push_back(w.basis);
        } else {
          next_layers.push_back(std::move(w));
        }
      }
      if (used < v.dim()) {
        // Complement attached to irreducible non-linear factors: contains no
        // rational eigenform, so it is reported but not split.
        out.irrational_blocks.push_back(v.dim() - used);
      }
    }
    layers = std::move(next_layers);
  }

  // Coefficients: a_p from the eigenvector, then extended multiplicatively.
  std::vector<std::uint64_t> primes;
  for (long long p = 2; p <= coeff_bound; ++p) {
    if (is_prime_u64(static_cast<std::uint64_t>(p))) primes.push_back(static_cast<std::uint64_t>(p));
  }

  struct Extracted {
    std::map<long, long long> ap;
  };
  std::vector<Extracted> extracted(lines.size());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const QMat& v = lines[li];
    std::size_t nz = 0;
    while (nz < v.rows() && v.at(nz, 0) == 0) ++nz;
    if (nz == v.rows()) throw std::logic_error("rational_newforms: zero eigenvector");
    for (auto p : primes) {
      QMat w = mat_mul(hecke_full(static_cast<long long>(p)), v);
      Rat ap = w.at(nz, 0) / v.at(nz, 0);
      for (std::size_t row = 0; row < v.rows(); ++row) {
        if (w.at(row, 0) != ap * v.at(row, 0)) {
          throw std::logic_error("rational_newforms: vector is not an eigenvector of T_" + std::to_string(p));
        }
      }
      long long a = rat_to_ll(ap, "rational_newforms eigenvalue");
      if (N % static_cast<long>(p) != 0) {
        Int b = weil_bound(static_cast<long long>(p), k);
        if (Int(a) * Int(a) > b * b) {
          throw std::logic_error("rational_newforms: eigenvalue violates the Weil bound at p=" + std::to_string(p));
        }
      }
      extracted[li].ap[static_cast<long>(p)] = a;
    }
  }

  std::vector<std::size_t> order(lines.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    for (auto p : primes) {
      long long ax = extracted[x].ap.at(static_cast<long>(p));
      long long ay = extracted[y].ap.at(static_cast<long>(p));
      if (ax != ay) return ax < ay;
    }
    return x < y;
  });

  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const auto& ap = extracted[order[oi]].ap;
    Newform f;
    f.level = N;
    f.weight = k;
    f.label = std::to_string(N) + "-" + std::to_string(k) + "-" + std::to_string(oi + 1);
    f.coeffs[1] = 1;
    // Prime powers by the Hecke recursion, then all n multiplicatively.
    for (auto p : primes) {
      long long lp = static_cast<long long>(p);
      long long pw = lp;
      if (pw > coeff_bound) break;
      long long pkm1 = 1;
      for (long i = 0; i < k - 1; ++i) pkm1 *= lp;
      std::vector<long long> apow{1, ap.at(static_cast<long>(p))};
      while (pw * lp <= coeff_bound) {
        pw *= lp;
        long long next;
        if (N % lp == 0) {
          next = apow.back() * ap.at(static_cast<long>(p));
        } else {
          next = ap.at(static_cast<long>(p)) * apow[apow.size() - 1] - pkm1 * apow[apow.size() - 2];
        }
        apow.push_back(next);
      }
      long long q2 = lp;
      for (std::size_t e = 1; e < apow.size(); ++e) {
        f.coeffs[static_cast<long>(q2)] = apow[e];
        q2 *= lp;
      }
    }
    for (long n = 2; n <= coeff_bound; ++n) {
      if (f.coeffs.count(n)) continue;
      long m = n;
      long long val = 1;
      for (auto p : primes) {
        long lp = static_cast<long>(p);
        if (m % lp != 0) continue;
        long pe = 1;
        while (m % lp == 0) {
          m /= lp;
          pe *= lp;
        }
        val *= f.coeffs.at(pe);
        if (m == 1) break;
      }
      if (m != 1) throw std::logic_error("rational_newforms: factorization bookkeeping failed");
      f.coeffs[n] = val;
    }
    out.forms.push_back(std::move(f));
  }
  return out;
}

}  // namespace serrematch
