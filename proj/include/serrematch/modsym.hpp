#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "serrematch/linalg.hpp"

namespace serrematch {

// P^1(Z/N) with one normalized representative per class.
class P1Table {
 public:
  static P1Table build(long N);

  long level() const { return N_; }
  std::size_t size() const { return reps_.size(); }
  const std::pair<long, long>& rep(std::size_t idx) const { return reps_[idx]; }

  // Index of the class of (c : d), or -1 if gcd(c, d, N) > 1.
  long index(long c, long d) const;

  // Canonical representative, or {-1, -1} for invalid pairs.
  static std::pair<long, long> normalize(long N, long c, long d);

 private:
  long N_ = 1;
  std::vector<std::pair<long, long>> reps_;
  std::unordered_map<long long, long> lookup_;
};

struct Mat22 {
  long long a, b, c, d;
};

// Merel's set X_n of integer matrices of determinant n; summing the induced
// action over the set gives T_n on Manin symbols. Enumeration order is fixed.
std::vector<Mat22> merel_matrices(long long n);

long psi_index(long N);
long nu2_count(long N);
long nu3_count(long N);
long nu_infinity(long N);
long genus_x0(long N);

// dim S_k(Gamma0(N)) for even k >= 2, trivial character.
long dim_cusp_forms(long N, long k);

struct Newform {
  long level = 0;
  long weight = 0;
  std::string label;
  std::map<long, long long> coeffs;  // n -> a_n, n up to the requested bound

  long long a(long n) const;
};

class MSpace;

// A Hecke-stable subspace, held as a reduced-column-echelon basis over the
// ambient plus-quotient coordinates.
struct Subspace {
  const MSpace* space = nullptr;
  QMat basis;
  std::vector<std::size_t> pivot_rows;

  std::size_t dim() const { return basis.cols(); }
};

struct LinearOperator {
  QMat matrix;
  std::string label;
};

// Weight-k modular symbols for Gamma0(N) with trivial character, in the
// quotient by the 2-term, 3-term, and star-involution relations.
class MSpace {
 public:
  static MSpace build(long N, long k);

  long level() const { return N_; }
  long weight() const { return k_; }
  std::size_t dim() const { return dim_; }
  const P1Table& p1() const { return p1_; }

  // T_n on the quotient, any n >= 1 (Merel matrices; exact rational entries).
  QMat hecke_matrix(long long n) const;

  Subspace full_subspace() const;
  Subspace cuspidal_subspace() const;
  Subspace new_subspace() const;

  // Expression of the symbol P*{alpha, beta} in the quotient basis, where P
  // has coefficient vector poly (poly[i] multiplies X^i Y^{k-2-i}) and the
  // endpoints are rational numbers num/den (den 0 meaning the infinite cusp).
  std::vector<Rat> symbol_to_basis(const std::vector<Int>& poly, std::pair<long long, long long> alpha,
                                   std::pair<long long, long long> beta) const;

  // Matrix of the level-lowering map with parameter t | N/M into target
  // (level M | N), scaled by t^{k-2}; shape target.dim() x dim().
  QMat degeneracy_matrix(const MSpace& target, long long t) const;

  std::size_t generator_count() const { return gen_expr_.size(); }
  const std::vector<Rat>& generator_expression(std::size_t gen) const { return gen_expr_[gen]; }
  std::pair<long, long> basis_generator(std::size_t b) const { return basis_gens_[b]; }

 private:
  MSpace() = default;

  long N_ = 1;
  long k_ = 2;
  P1Table p1_;
  std::size_t dim_ = 0;
  std::vector<std::vector<Rat>> gen_expr_;        // generator -> dense basis expression
  std::vector<std::pair<long, long>> basis_gens_; // basis element -> (p1 index, monomial degree)
};

// Restriction of an operator on the ambient space to an invariant subspace.
QMat restrict_operator(const QMat& full, const Subspace& v);

LinearOperator hecke(const Subspace& v, long long n);

Subspace subspace_from_columns(const MSpace& space, QMat columns);

struct NewformDecomposition {
  std::vector<Newform> forms;                 // rational newforms, a_n for n <= bound
  std::vector<std::size_t> irrational_blocks; // dimensions of unsplit non-rational blocks
};

NewformDecomposition rational_newforms(long N, long k, long coeff_bound);

}  // namespace serrematch
