#include <doctest.h>

#include <random>

#include "serrematch/linalg.hpp"

using namespace serrematch;

namespace {

QMat from_rows(const std::vector<std::vector<long>>& rows) {
  QMat m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
  return m;
}

}  // namespace

TEST_CASE("rref on a known matrix") {
  QMat a = from_rows({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
  auto pivots = rref(a);
  REQUIRE(pivots == std::vector<std::size_t>{0, 1});
  CHECK(a.at(0, 0) == 1);
  CHECK(a.at(0, 1) == 0);
  CHECK(a.at(0, 2) == 1);
  CHECK(a.at(1, 0) == 0);
  CHECK(a.at(1, 1) == 1);
  CHECK(a.at(1, 2) == 1);
  for (std::size_t j = 0; j < 3; ++j) CHECK(a.at(2, j) == 0);
}

TEST_CASE("kernel basis solves A x = 0") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 3 + rng() % 4, m = 3 + rng() % 4;
    QMat a(n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) a.at(i, j) = static_cast<long>(rng() % 9) - 4;
    QMat k = kernel_basis(a);
    QMat prod = mat_mul(a, k);
    CHECK(prod.is_zero());
    // rank-nullity
    QMat copy = a;
    auto pivots = rref(copy);
    CHECK(pivots.size() + k.cols() == m);
  }
}

TEST_CASE("charpoly of a diagonal matrix") {
  QMat d = from_rows({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}});
  auto cp = charpoly(d);
  // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
  REQUIRE(cp.size() == 4);
  CHECK(cp[0] == -6);
  CHECK(cp[1] == 11);
  CHECK(cp[2] == -6);
  CHECK(cp[3] == 1);
}

TEST_CASE("charpoly via Cayley-Hamilton on random matrices") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = 2 + rng() % 4;
    QMat a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a.at(i, j) = static_cast<long>(rng() % 7) - 3;
    auto cp = charpoly(a);
    QMat acc(n, n);  // cp(A) by Horner; must vanish
    for (std::size_t step = 0; step <= n; ++step) {
      acc = mat_mul(acc, a);
      for (std::size_t i = 0; i < n; ++i) acc.at(i, i) += cp[n - step];
    }
    CHECK(acc.is_zero());
  }
}

TEST_CASE("column_rcef produces unit pivot rows") {
  QMat b = from_rows({{2, 4}, {0, 0}, {6, 2}, {4, 8}});
  auto pivot_rows = column_rcef(b);
  REQUIRE(b.cols() == 2);
  REQUIRE(pivot_rows.size() == 2);
  for (std::size_t i = 0; i < pivot_rows.size(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      CHECK(b.at(pivot_rows[i], j) == (i == j ? 1 : 0));
    }
  }
}

TEST_CASE("vstack shapes") {
  QMat a = from_rows({{1, 2}});
  QMat b = from_rows({{3, 4}, {5, 6}});
  QMat s = vstack(a, b);
  REQUIRE(s.rows() == 3);
  CHECK(s.at(2, 1) == 6);
}
