#include "doctest.h"
#include "ptspec/polynomial.hpp"

using ptspec::Polynomial;

TEST_CASE("polynomial evaluation and calculus") {
  Polynomial p{1.0, -2.0, 3.0};  // 1 - 2t + 3t^2
  CHECK(p(2.0) == doctest::Approx(9.0));
  CHECK(p.degree() == 2);
  CHECK(p.derivative() == Polynomial{-2.0, 6.0});
  CHECK(p.antiderivative() == Polynomial{0.0, 1.0, -1.0, 1.0});
  CHECK(p.antiderivative()(0.0) == 0.0);
}

TEST_CASE("trailing zeros are trimmed") {
  CHECK(Polynomial{1.0, 0.0, 0.0} == Polynomial{1.0});
  CHECK(Polynomial{0.0, 0.0}.is_zero());
  CHECK(Polynomial{}.degree() == -1);
  CHECK(Polynomial{}(3.0) == 0.0);
}

TEST_CASE("parity") {
  CHECK(Polynomial{0.0, 0.0, 1.0}.is_even());
  CHECK_FALSE(Polynomial{0.0, 1.0}.is_even());
  CHECK(Polynomial{0.0, 1.0, 0.0, 4.0}.is_odd());
  CHECK(Polynomial{}.is_even());
}

TEST_CASE("arithmetic") {
  Polynomial a{1.0, 1.0};
  Polynomial b{-1.0, 1.0};
  CHECK(a * b == Polynomial{-1.0, 0.0, 1.0});
  CHECK(a - a == Polynomial{});
  CHECK(a + b == Polynomial{0.0, 2.0});
  CHECK(2.0 * a == Polynomial{2.0, 2.0});
}
