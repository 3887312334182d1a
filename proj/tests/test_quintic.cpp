#include <doctest.h>

#include "serrematch/quintic.hpp"

using namespace serrematch;

TEST_CASE("schoen form coefficients") {
  QuinticForm f1 = schoen_form(1);
  CHECK(f1.coefficient({3, 2, 0, 0, 0}) == 10);
  CHECK(f1.coefficient({5, 0, 0, 0, 0}) == 1);
  CHECK(f1.coefficient({1, 4, 0, 0, 0}) == 5);
  CHECK(f1.coefficient({2, 0, 1, 1, 1}) == -20);
  CHECK(f1.coefficient({0, 2, 1, 1, 1}) == 20);
  CHECK(f1.coefficient({0, 0, 5, 0, 0}) == 16);
  CHECK(f1.terms().size() == 8);

  QuinticForm f2 = schoen_form(2);
  CHECK(f2.coefficient({1, 4, 0, 0, 0}) == 20);  // 5 d^2
  CHECK(f2.coefficient({3, 2, 0, 0, 0}) == 20);  // 10 d
  CHECK(f2.coefficient({0, 2, 1, 1, 1}) == 40);  // 20 d

  QuinticForm fm1 = schoen_form(-1);
  CHECK(fm1.coefficient({3, 2, 0, 0, 0}) == -10);
  CHECK(fm1.coefficient({1, 4, 0, 0, 0}) == 5);
}

TEST_CASE("schoen form input validation") {
  CHECK_THROWS_AS(schoen_form(0), std::invalid_argument);
  CHECK_THROWS_AS(schoen_form(4), std::invalid_argument);
  CHECK_THROWS_AS(schoen_form(12), std::invalid_argument);
  CHECK_THROWS_AS(schoen_form(-8), std::invalid_argument);
  CHECK_NOTHROW(schoen_form(-1));
  CHECK_NOTHROW(schoen_form(6));
}

TEST_CASE("squarefree predicate") {
  CHECK(is_squarefree(1));
  CHECK(is_squarefree(-1));
  CHECK(is_squarefree(2));
  CHECK(is_squarefree(30));
  CHECK(is_squarefree(-30));
  CHECK_FALSE(is_squarefree(0));
  CHECK_FALSE(is_squarefree(4));
  CHECK_FALSE(is_squarefree(-9));
  CHECK_FALSE(is_squarefree(50));
}

TEST_CASE("quintic form validation") {
  QuinticForm::TermMap bad;
  bad[{4, 0, 0, 0, 0}] = 1;  // degree 4
  CHECK_THROWS_AS(QuinticForm(bad, {"a", "b", "c", "d", "e"}), std::invalid_argument);

  QuinticForm::TermMap empty;
  CHECK_THROWS_AS(QuinticForm(empty, {"a", "b", "c", "d", "e"}), std::invalid_argument);

  QuinticForm::TermMap zero;
  zero[{5, 0, 0, 0, 0}] = 0;
  CHECK_THROWS_AS(QuinticForm(zero, {"a", "b", "c", "d", "e"}), std::invalid_argument);
}
