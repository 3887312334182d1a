#include "serrematch/quintic.hpp"

#include <cstdlib>
#include <stdexcept>

namespace serrematch {

QuinticForm::QuinticForm(TermMap terms, std::array<std::string, 5> coordinate_names)
    : terms_(std::move(terms)), names_(std::move(coordinate_names)) {
  if (terms_.empty()) throw std::invalid_argument("QuinticForm: at least one term required");
  if (terms_.size() > 126) throw std::invalid_argument("QuinticForm: too many terms for a quintic in 5 variables");
  for (const auto& [e, c] : terms_) {
    if (c == 0) throw std::invalid_argument("QuinticForm: zero coefficient");
    unsigned deg = 0;
    for (auto x : e) deg += x;
    if (deg != 5) throw std::invalid_argument("QuinticForm: non-quintic exponent vector");
  }
}

long long QuinticForm::coefficient(const ExponentVec& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

bool is_squarefree(long long d) {
  if (d == 0) return false;
  long long n = std::llabs(d);
  for (long long q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      n /= q;
      if (n % q == 0) return false;
    }
  }
  return true;
}

QuinticForm schoen_uv_twist(long long m) {
  if (m == 0) throw std::invalid_argument("schoen_uv_twist: m must be nonzero");
  QuinticForm::TermMap t;
  t[{5, 0, 0, 0, 0}] = 1;
  t[{3, 2, 0, 0, 0}] = 10 * m;
  t[{1, 4, 0, 0, 0}] = 5 * m * m;
  t[{0, 0, 5, 0, 0}] = 16;
  t[{0, 0, 0, 5, 0}] = 16;
  t[{0, 0, 0, 0, 5}] = 16;
  t[{2, 0, 1, 1, 1}] = -20;
  t[{0, 2, 1, 1, 1}] = 20 * m;
  return QuinticForm(std::move(t), {"U", "V", "X2", "X3", "X4"});
}

QuinticForm schoen_form(long long d) {
  if (d == 0) throw std::invalid_argument("schoen_form: d must be nonzero");
  if (!is_squarefree(d)) throw std::invalid_argument("schoen_form: d must be squarefree");
  return schoen_uv_twist(d);
}

}  // namespace serrematch
