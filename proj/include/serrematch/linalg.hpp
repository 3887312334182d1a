#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace serrematch {

using Int = mpz_class;
using Rat = mpq_class;

// Dense exact-rational matrix, row-major.
class QMat {
 public:
  QMat() = default;
  QMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rat& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rat& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  static QMat identity(std::size_t n);
  bool is_zero() const;

  friend bool operator==(const QMat& a, const QMat& b) { return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rat> data_;
};

QMat mat_mul(const QMat& a, const QMat& b);
QMat vstack(const QMat& top, const QMat& bottom);

// In-place reduced row echelon form; returns pivot column indices.
// Elimination is fraction-free: rows are first scaled to primitive integer
// vectors and combined by integer cross-multiplication with content
// stripping; only the final pivot normalization divides.
std::vector<std::size_t> rref(QMat& a);

// Basis of {x : A x = 0}; columns form a reduced column echelon basis.
QMat kernel_basis(const QMat& a);

// Reduced column echelon form in place; returns pivot row indices.
std::vector<std::size_t> column_rcef(QMat& b);

// Characteristic polynomial coefficients [c0, ..., cn], monic, by
// Faddeev-LeVerrier (exact over Q).
std::vector<Rat> charpoly(const QMat& a);

}  // namespace serrematch
