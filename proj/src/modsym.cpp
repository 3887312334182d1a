#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "serrematch/modsym.hpp"

namespace serrematch {

namespace {

constexpr long kMaxLevel = 5000;
constexpr long kMaxWeight = 12;

// Coefficients of (a X + b Y)^n as a vector indexed by the X-exponent.
std::vector<Int> linear_power(long long a, long long b, int n) {
  std::vector<Int> out(n + 1);
  Int binom = 1;
  std::vector<Int> apow(n + 1), bpow(n + 1);
  apow[0] = 1;
  bpow[0] = 1;
  for (int j = 1; j <= n; ++j) {
    apow[j] = apow[j - 1] * a;
    bpow[j] = bpow[j - 1] * b;
  }
  for (int j = 0; j <= n; ++j) {
    if (j > 0) binom = binom * (n - j + 1) / j;
    out[j] = binom * apow[j] * bpow[n - j];
  }
  return out;
}

// Action of an integer matrix on the monomial X^i Y^{k2-i}: coefficients of
// (a X + b Y)^i (c X + d Y)^{k2-i}, indexed by the X-exponent.
std::vector<Int> monomial_action(int i, int k2, const Mat22& m) {
  std::vector<Int> left = linear_power(m.a, m.c, i);
  std::vector<Int> right = linear_power(m.b, m.d, k2 - i);
  std::vector<Int> out(k2 + 1);
  for (std::size_t s = 0; s < left.size(); ++s) {
    if (left[s] == 0) continue;
    for (std::size_t t = 0; t < right.size(); ++t) {
      if (right[t] != 0) out[s + t] += left[s] * right[t];
    }
  }
  return out;
}

std::vector<Int> poly_action(const std::vector<Int>& poly, int k2, const Mat22& m) {
  std::vector<Int> out(k2 + 1);
  for (int i = 0; i <= k2; ++i) {
    if (poly[i] == 0) continue;
    std::vector<Int> part = monomial_action(i, k2, m);
    for (int j = 0; j <= k2; ++j) out[j] += poly[i] * part[j];
  }
  return out;
}

// Union-find with signs; a class collapses to zero on a sign conflict.
struct SignedDSU {
  std::vector<long> parent;
  std::vector<int> sign;  // sign relative to parent
  std::vector<bool> zero;

  explicit SignedDSU(std::size_t n) : parent(n), sign(n, 1), zero(n, false) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<long>(i);
  }

  std::pair<long, int> find(long x) {
    std::vector<long> path;
    long root = x;
    while (parent[root] != root) {
      path.push_back(root);
      root = parent[root];
    }
    int s = 1;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      s *= sign[*it];
      parent[*it] = root;
      sign[*it] = s;
    }
    return {root, path.empty() ? 1 : sign[x]};
  }

  // Impose x = s * y.
  void unite(long x, long y, int s) {
    auto [rx, sx] = find(x);
    auto [ry, sy] = find(y);
    if (rx == ry) {
      if (sx != s * sy) zero[rx] = true;
      return;
    }
    parent[ry] = rx;
    sign[ry] = sx * s * sy;
    if (zero[ry]) zero[rx] = true;
  }
};

struct Xgcd {
  long long g, s, t;  // s*a + t*b = g
};

Xgcd xgcd_ll(long long a, long long b) {
  long long s0 = 1, s1 = 0, t0 = 0, t1 = 1, r0 = a, r1 = b;
  while (r1 != 0) {
    long long q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
  }
  return {r0, s0, t0};
}

// Lift a normalized class (c : d) of P^1(Z/N) to a matrix [a, b; c, d'] in
// SL2(Z) whose bottom row is congruent to (c, d) mod N.
Mat22 lift_to_sl2(long c, long d, long N) {
  if (N == 1) return {1, 0, 0, 1};
  if (c == 0) return {1, 0, 0, 1};  // class (0 : 1)
  long long cc = c, dd = d;
  long long guard = 0;
  while (std::gcd(cc, dd) != 1) {
    dd += N;
    if (++guard > 2 * static_cast<long long>(N) + 4) throw std::logic_error("lift_to_sl2: no coprime lift found");
  }
  Xgcd e = xgcd_ll(cc, dd);  // s*c + t*d' = 1
  return {e.t, -e.s, cc, dd};
}

// Class key for cusps of Gamma0(N) with the extra identification
// (a : c) ~ (-a : c) used in the star quotient.
std::pair<long, long> cusp_class_key(long N, long long a, long long c) {
  long long g = std::gcd(std::llabs(c), static_cast<long long>(N));
  if (g == 0) g = N;  // c == 0 and N arbitrary
  long long s = (c == 0) ? 0 : c / g;
  long long m = std::gcd(g, static_cast<long long>(N) / g);
  if (m <= 1) return {static_cast<long>(g), 0};
  long long x = ((a % m) * (s % m)) % m;
  if (x < 0) x += m;
  long long x2 = (m - x) % m;
  return {static_cast<long>(g), static_cast<long>(std::min(x, x2))};
}

}  // namespace

MSpace MSpace::build(long N, long k) {
  if (N < 1) throw std::invalid_argument("MSpace::build: level must be positive");
  if (k % 2 != 0) throw std::invalid_argument("MSpace::build: odd weight rejected (trivial character forces even weight)");
  if (k < 2) throw std::invalid_argument("MSpace::build: weight must be >= 2");
  if (N > kMaxLevel || k > kMaxWeight) {
    throw std::invalid_argument("MSpace::build: level/weight beyond configured caps (N <= 5000, k <= 12)");
  }

  MSpace sp;
  sp.N_ = N;
  sp.k_ = k;
  sp.p1_ = P1Table::build(N);
  const int k2 = static_cast<int>(k) - 2;
  const std::size_t np1 = sp.p1_.size();
  const std::size_t n_gens = np1 * (k2 + 1);
  auto gen_id = [&](long p1_idx, int mono) { return static_cast<long>(p1_idx) * (k2 + 1) + mono; };

  const Mat22 sigma{0, -1, 1, 0};
  const Mat22 tau{0, -1, 1, -1};
  const Mat22 tau2{-1, 1, -1, 0};

  // Two-term and star relations identify generators up to sign.
  SignedDSU dsu(n_gens);
  for (std::size_t idx = 0; idx < np1; ++idx) {
    auto [c, d] = sp.p1_.rep(idx);
    long idx_sigma = sp.p1_.index(d, -c);
    long idx_eta = sp.p1_.index(-c, d);
    for (int i = 0; i <= k2; ++i) {
      int sgn_i = (i % 2 == 0) ? 1 : -1;
      // x + x.sigma = 0, with x.sigma = (-1)^i * [X^{k2-i} Y^i at (d : -c)]
      dsu.unite(gen_id(idx, i), gen_id(idx_sigma, k2 - i), -sgn_i);
      // x = x.eta, with x.eta = (-1)^i * [same monomial at (-c : d)]
      dsu.unite(gen_id(idx, i), gen_id(idx_eta, i), sgn_i);
    }
  }

  // Classes surviving the identifications.
  std::vector<long> class_of(n_gens, -1);
  std::vector<long> class_root;
  for (std::size_t g = 0; g < n_gens; ++g) {
    auto [root, s] = dsu.find(static_cast<long>(g));
    (void)s;
    if (dsu.zero[root]) continue;
    if (class_of[root] == -1) {
      class_of[root] = static_cast<long>(class_root.size());
      class_root.push_back(root);
    }
    class_of[g] = class_of[root];
  }
  const std::size_t n_classes = class_root.size();

  // Three-term relations over the surviving classes.
  QMat rel(n_gens, n_classes);
  for (std::size_t idx = 0; idx < np1; ++idx) {
    auto [c, d] = sp.p1_.rep(idx);
    long idx_tau = sp.p1_.index(d, -c - d);
    long idx_tau2 = sp.p1_.index(-c - d, c);
    for (int i = 0; i <= k2; ++i) {
      long row = gen_id(idx, i);
      auto add_term = [&](long p1_idx, const std::vector<Int>& coeffs) {
        for (int m = 0; m <= k2; ++m) {
          if (coeffs[m] == 0) continue;
          long g = gen_id(p1_idx, m);
          auto [root, s] = dsu.find(g);
          if (dsu.zero[root]) continue;
          rel.at(row, class_of[g]) += Rat(coeffs[m]) * s;
        }
      };
      std::vector<Int> self(k2 + 1);
      self[i] = 1;
      add_term(static_cast<long>(idx), self);
      add_term(idx_tau, monomial_action(i, k2, tau));
      add_term(idx_tau2, monomial_action(i, k2, tau2));
    }
  }

  std::vector<std::size_t> pivots = rref(rel);
  std::vector<bool> is_pivot(n_classes, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<long> free_index(n_classes, -1);
  sp.basis_gens_.clear();
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (is_pivot[c]) continue;
    free_index[c] = static_cast<long>(sp.basis_gens_.size());
    long root_gen = class_root[c];
    sp.basis_gens_.push_back({root_gen / (k2 + 1), root_gen % (k2 + 1)});
  }
  sp.dim_ = sp.basis_gens_.size();

  // Expression of each class in the free basis: free classes are unit
  // vectors; pivot classes come from their reduced relation row.
  std::vector<std::vector<Rat>> class_expr(n_classes, std::vector<Rat>(sp.dim_));
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (!is_pivot[c]) class_expr[c][free_index[c]] = 1;
  }
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    std::size_t pc = pivots[i];
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (is_pivot[c] || rel.at(i, c) == 0) continue;
      class_expr[pc][free_index[c]] = -rel.at(i, c);
    }
  }

  sp.gen_expr_.assign(n_gens, {});
  for (std::size_t g = 0; g < n_gens; ++g) {
    auto [root, s] = dsu.find(static_cast<long>(g));
    if (dsu.zero[root]) {
      sp.gen_expr_[g].assign(sp.dim_, Rat(0));
      continue;
    }
    std::vector<Rat> expr = class_expr[class_of[g]];
    if (s == -1) {
      for (auto& x : expr) x = -x;
    }
    sp.gen_expr_[g] = std::move(expr);
  }
  return sp;
}

QMat MSpace::hecke_matrix(long long n) const {
  const int k2 = static_cast<int>(k_) - 2;
  QMat T(dim_, dim_);
  std::vector<Mat22> mats = merel_matrices(n);
  for (std::size_t b = 0; b < dim_; ++b) {
    auto [idx, i] = basis_gens_[b];
    auto [c, d] = p1_.rep(idx);
    for (const auto& m : mats) {
      long long c2 = c * m.a + d * m.c;
      long long d2 = c * m.b + d * m.d;
      long idx2 = p1_.index(static_cast<long>(c2 % N_), static_cast<long>(d2 % N_));
      if (idx2 < 0) continue;
      std::vector<Int> coeffs = monomial_action(static_cast<int>(i), k2, m);
      for (int mm = 0; mm <= k2; ++mm) {
        if (coeffs[mm] == 0) continue;
        const std::vector<Rat>& expr = gen_expr_[idx2 * (k2 + 1) + mm];
        Rat factor(coeffs[mm]);
        for (std::size_t row = 0; row < dim_; ++row) {
          if (expr[row] != 0) T.at(row, b) += factor * expr[row];
        }
      }
    }
  }
  return T;
}

Subspace subspace_from_columns(const MSpace& space, QMat columns) {
  Subspace v;
  v.space = &space;
  v.pivot_rows = column_rcef(columns);
  v.basis = std::move(columns);
  return v;
}

Subspace MSpace::full_subspace() const {
  Subspace v;
  v.space = this;
  v.basis = QMat::identity(dim_);
  v.pivot_rows.resize(dim_);
  for (std::size_t i = 0; i < dim_; ++i) v.pivot_rows[i] = i;
  return v;
}

Subspace MSpace::cuspidal_subspace() const {
  const int k2 = static_cast<int>(k_) - 2;
  std::map<std::pair<long, long>, std::size_t> cusp_rows;
  std::vector<std::map<std::size_t, Rat>> cols(dim_);
  auto row_of = [&](long long a, long long c) {
    auto key = cusp_class_key(N_, a, c);
    auto it = cusp_rows.find(key);
    if (it == cusp_rows.end()) it = cusp_rows.emplace(key, cusp_rows.size()).first;
    return it->second;
  };
  for (std::size_t b = 0; b < dim_; ++b) {
    auto [idx, i] = basis_gens_[b];
    auto [c, d] = p1_.rep(idx);
    Mat22 g = lift_to_sl2(c, d, N_);
    // The boundary of [X^i Y^{k2-i}, (c:d)] hits only the extreme monomials.
    if (i == k2) cols[b][row_of(g.a, g.c)] += 1;
    if (i == 0) cols[b][row_of(g.b, g.d)] -= 1;
  }
  QMat boundary(cusp_rows.size(), dim_);
  for (std::size_t b = 0; b < dim_; ++b) {
    for (const auto& [row, val] : cols[b]) boundary.at(row, b) += val;
  }
  QMat kern = kernel_basis(boundary);
  Subspace v = subspace_from_columns(*this, std::move(kern));
  long expected = dim_cusp_forms(N_, k_);
  if (static_cast<long>(v.dim()) != expected) {
    throw std::logic_error("cuspidal dimension mismatch at (N=" + std::to_string(N_) + ", k=" + std::to_string(k_) +
                           "): got " + std::to_string(v.dim()) + ", dimension formula gives " + std::to_string(expected));
  }
  return v;
}

std::vector<Rat> MSpace::symbol_to_basis(const std::vector<Int>& poly, std::pair<long long, long long> alpha,
                                         std::pair<long long, long long> beta) const {
  const int k2 = static_cast<int>(k_) - 2;
  if (poly.size() != static_cast<std::size_t>(k2 + 1)) throw std::invalid_argument("symbol_to_basis: bad polynomial size");
  std::vector<Rat> result(dim_);

  // Adds sign * P{infinity, x/y} via the continued-fraction path; each
  // consecutive pair of convergents gives a unimodular segment.
  auto add_path = [&](std::pair<long long, long long> endpoint, int sign) {
    long long num = endpoint.first, den = endpoint.second;
    if (den == 0) return;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(std::llabs(num), den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    long long p_prev = 1, q_prev = 0;  // convergent p_{-1}/q_{-1} = infinity
    long long p_cur, q_cur;
    long long a = num, b = den;
    bool first = true;
    int j = 0;
    while (b != 0) {
      long long quot = a / b;
      if ((a % b != 0) && ((a < 0) != (b < 0))) --quot;  // floor division
      long long rem = a - quot * b;
      long long p_new = first ? quot : quot * p_cur + p_prev;
      long long q_new = first ? 1 : quot * q_cur + q_prev;
      if (!first) {
        p_prev = p_cur;
        q_prev = q_cur;
      }
      p_cur = p_new;
      q_cur = q_new;
      // Segment {p_{j-1}/q_{j-1} -> p_j/q_j} as an SL2 matrix.
      long long sgn = (j % 2 == 0) ? -1 : 1;  // (-1)^{j-1}
      Mat22 h{p_cur, sgn * p_prev, q_cur, sgn * q_prev};
      std::vector<Int> acted = poly_action(poly, k2, h);
      long idx = p1_.index(static_cast<long>(h.c % N_), static_cast<long>(h.d % N_));
      if (idx >= 0) {
        for (int m = 0; m <= k2; ++m) {
          if (acted[m] == 0) continue;
          const std::vector<Rat>& expr = gen_expr_[idx * (k2 + 1) + m];
          Rat factor = Rat(acted[m]) * sign;
          for (std::size_t row = 0; row < dim_; ++row) {
            if (expr[row] != 0) result[row] += factor * expr[row];
          }
        }
      }
      a = b;
      b = rem;
      first = false;
      ++j;
    }
  };

  add_path(beta, 1);
  add_path(alpha, -1);
  return result;
}

QMat MSpace::degeneracy_matrix(const MSpace& target, long long t) const {
  if (N_ % target.level() != 0 || (N_ / target.level()) % t != 0) {
    throw std::invalid_argument("degeneracy_matrix: target level and parameter must divide");
  }
  if (target.weight() != k_) throw std::invalid_argument("degeneracy_matrix: weight mismatch");
  const int k2 = static_cast<int>(k_) - 2;
  QMat D(target.dim(), dim_);
  for (std::size_t b = 0; b < dim_; ++b) {
    auto [idx, i] = basis_gens_[b];
    auto [c, d] = p1_.rep(idx);
    Mat22 g = lift_to_sl2(c, d, N_);
    // Symbol [P, (c:d)] = (P|g^{-1}){g0, g-infinity}; the level-lowering map
    // with parameter t sends it to (P|g^{-1}[1,0;0,t]){t g0, t g-infinity},
    // up to the harmless overall factor t^{k-2}.
    Mat22 m{g.d, -g.b * t, -g.c, g.a * t};
    std::vector<Int> poly(k2 + 1);
    poly[i] = 1;
    std::vector<Int> acted = poly_action(poly, k2, m);
    std::vector<Rat> col = target.symbol_to_basis(acted, {g.b * t, g.d}, {g.a * t, g.c});
    for (std::size_t row = 0; row < target.dim(); ++row) D.at(row, b) = col[row];
  }
  return D;
}

Subspace MSpace::new_subspace() const {
  Subspace cusp = cuspidal_subspace();
  if (cusp.dim() == 0) return cusp;
  QMat stacked(0, cusp.dim());
  bool any = false;
  for (long M = 1; M < N_; ++M) {
    if (N_ % M != 0) continue;
    MSpace target = MSpace::build(M, k_);
    if (target.dim() == 0) continue;
    long quotient = N_ / M;
    for (long long t = 1; t <= quotient; ++t) {
      if (quotient % t != 0) continue;
      QMat D = degeneracy_matrix(target, t);
      QMat DC = mat_mul(D, cusp.basis);
      stacked = any ? vstack(stacked, DC) : std::move(DC);
      any = true;
    }
  }
  if (!any) return cusp;
  QMat K = kernel_basis(stacked);
  return subspace_from_columns(*this, mat_mul(cusp.basis, K));
}

QMat restrict_operator(const QMat& full, const Subspace& v) {
  QMat image = mat_mul(full, v.basis);
  QMat restricted(v.dim(), v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) {
    for (std::size_t j = 0; j < v.dim(); ++j) restricted.at(i, j) = image.at(v.pivot_rows[i], j);
  }
  if (!(mat_mul(v.basis, restricted) == image)) {
    throw std::logic_error("restrict_operator: subspace is not invariant under the operator");
  }
  return restricted;
}

LinearOperator hecke(const Subspace& v, long long n) {
  if (v.space == nullptr) throw std::invalid_argument("hecke: empty subspace");
  return {restrict_operator(v.space->hecke_matrix(n), v), "T_" + std::to_string(n)};
}

long long Newform::a(long n) const {
  auto it = coeffs.find(n);
  if (it == coeffs.end()) {
    throw std::out_of_range("Newform::a: coefficient a_" + std::to_string(n) + " not stored for " + label);
  }
  return it->second;
}

}  // namespace serrematch
