#include "serrematch/linalg.hpp"

#include <stdexcept>

namespace serrematch {

QMat QMat::identity(std::size_t n) {
  QMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool QMat::is_zero() const {
  for (const auto& x : data_) {
    if (x != 0) return false;
  }
  return true;
}

QMat mat_mul(const QMat& a, const QMat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: shape mismatch");
  QMat out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rat& aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (b.at(k, j) != 0) out.at(i, j) += aik * b.at(k, j);
      }
    }
  }
  return out;
}

QMat vstack(const QMat& top, const QMat& bottom) {
  if (top.cols() == 0 && top.rows() == 0) return bottom;
  if (bottom.cols() == 0 && bottom.rows() == 0) return top;
  if (top.cols() != bottom.cols()) throw std::invalid_argument("vstack: column mismatch");
  QMat out(top.rows() + bottom.rows(), top.cols());
  for (std::size_t i = 0; i < top.rows(); ++i)
    for (std::size_t j = 0; j < top.cols(); ++j) out.at(i, j) = top.at(i, j);
  for (std::size_t i = 0; i < bottom.rows(); ++i)
    for (std::size_t j = 0; j < bottom.cols(); ++j) out.at(top.rows() + i, j) = bottom.at(i, j);
  return out;
}

namespace {

// Scale a row to a primitive integer vector with positive leading entry.
void make_row_primitive(QMat& a, std::size_t row) {
  Int lcm_den = 1;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (a.at(row, j) != 0) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), a.at(row, j).get_den().get_mpz_t());
  }
  if (lcm_den != 1) {
    for (std::size_t j = 0; j < a.cols(); ++j) a.at(row, j) *= Rat(lcm_den);
  }
  Int content = 0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (a.at(row, j) != 0) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), a.at(row, j).get_num().get_mpz_t());
  }
  if (content == 0) return;
  int lead_sign = 0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (a.at(row, j) != 0) {
      lead_sign = sgn(a.at(row, j));
      break;
    }
  }
  if (lead_sign < 0) content = -content;
  if (content != 1) {
    Rat inv(1, content);
    inv.canonicalize();
    for (std::size_t j = 0; j < a.cols(); ++j) a.at(row, j) *= inv;
  }
}

}  // namespace

std::vector<std::size_t> rref(QMat& a) {
  const std::size_t nr = a.rows(), nc = a.cols();
  for (std::size_t i = 0; i < nr; ++i) make_row_primitive(a, i);
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < nc && r < nr; ++col) {
    std::size_t sel = nr;
    for (std::size_t i = r; i < nr; ++i) {
      if (a.at(i, col) != 0) {
        sel = i;
        break;
      }
    }
    if (sel == nr) continue;
    if (sel != r) {
      for (std::size_t j = 0; j < nc; ++j) swap(a.at(sel, j), a.at(r, j));
    }
    for (std::size_t i = 0; i < nr; ++i) {
      if (i == r || a.at(i, col) == 0) continue;
      Rat piv = a.at(r, col);
      Rat fac = a.at(i, col);
      for (std::size_t j = 0; j < nc; ++j) {
        a.at(i, j) = a.at(i, j) * piv - a.at(r, j) * fac;
      }
      make_row_primitive(a, i);
    }
    pivots.push_back(col);
    ++r;
  }
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    Rat piv = a.at(i, pivots[i]);
    if (piv != 1) {
      Rat inv = 1 / piv;
      for (std::size_t j = 0; j < nc; ++j) a.at(i, j) *= inv;
    }
  }
  return pivots;
}

QMat kernel_basis(const QMat& a) {
  QMat work = a;
  std::vector<std::size_t> pivots = rref(work);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  QMat kern(a.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    std::size_t f = free_cols[k];
    kern.at(f, k) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      kern.at(pivots[i], k) = -work.at(i, f);
    }
  }
  return kern;
}

std::vector<std::size_t> column_rcef(QMat& b) {
  QMat t(b.cols(), b.rows());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) t.at(j, i) = b.at(i, j);
  std::vector<std::size_t> pivots = rref(t);
  // Drop zero rows of the transpose (dependent columns).
  std::size_t rank = pivots.size();
  QMat out(b.rows(), rank);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < rank; ++j) out.at(i, j) = t.at(j, i);
  b = std::move(out);
  return pivots;
}

std::vector<Rat> charpoly(const QMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("charpoly: square matrix required");
  const std::size_t n = a.rows();
  std::vector<Rat> c(n + 1);
  c[n] = 1;
  if (n == 0) return c;
  auto trace = [](const QMat& m) {
    Rat t = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m.at(i, i);
    return t;
  };
  QMat mk = a;
  c[n - 1] = -trace(mk);
  for (std::size_t k = 2; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) mk.at(i, i) += c[n - k + 1];
    mk = mat_mul(a, mk);
    c[n - k] = -trace(mk) / Rat(static_cast<unsigned long>(k));
  }
  return c;
}

}  // namespace serrematch
