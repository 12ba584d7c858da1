#include <cmath>
#include <random>

#include "doctest.h"
#include "ptspec/errors.hpp"
#include "ptspec/model.hpp"
#include "unit/oracles.hpp"

using namespace ptspec;

TEST_CASE("hermite_eval seeds and first recurrence step") {
  CHECK(hermite_eval(0, {3.0, 4.0}) == complex(1.0, 0.0));
  CHECK(hermite_eval(0, {-7.5, 0.25}) == complex(1.0, 0.0));
  CHECK(hermite_eval(1, {3.0, 4.0}) == complex(6.0, 8.0));
  CHECK(hermite_eval(2, {0.0, 0.0}) == complex(-2.0, 0.0));
}

TEST_CASE("hermite_eval order bound") {
  CHECK_NOTHROW(hermite_eval(64, {0.5, 0.0}));
  CHECK_THROWS_AS(hermite_eval(65, {0.5, 0.0}), CapabilityError);
  CHECK_THROWS_AS(hermite_eval(3, {0.5, 0.0}, 2), CapabilityError);
  CHECK_THROWS_AS(hermite_eval(-1, {0.5, 0.0}), InvalidArgument);
}

TEST_CASE("hermite_eval agrees with direct summation for real argument") {
  for (int n = 0; n <= 20; ++n) {
    for (double x = -5.0; x <= 5.0; x += 0.25) {
      const long double ref = oracle::hermite_sum(n, x);
      const complex got = hermite_eval(n, {x, 0.0});
      const double scale = std::max(1.0L, std::fabs(ref));
      INFO("n=" << n << " x=" << x);
      CHECK(std::abs(got.real() - static_cast<double>(ref)) <= 1e-10 * scale);
      CHECK(got.imag() == 0.0);
    }
  }
}

TEST_CASE("H_n(x - ig) H_n(x + ig) is real and even in x") {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> xs(-4.0, 4.0), gs(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = xs(rng), g = gs(rng);
    for (int n = 0; n <= 10; ++n) {
      const complex p = hermite_eval(n, {x, -g}) * hermite_eval(n, {x, g});
      const complex q = hermite_eval(n, {-x, -g}) * hermite_eval(n, {-x, g});
      const double mag = std::max(1.0, std::abs(p));
      INFO("n=" << n << " x=" << x << " g=" << g);
      CHECK(std::abs(p.imag()) <= 1e-12 * mag);
      CHECK(std::abs(p - q) <= 1e-12 * mag);
    }
  }
}

TEST_CASE("drive_eval on the three representations") {
  CHECK(drive_eval(Drive::constant(1.0), 5.0) == 1.0);
  CHECK(drive_eval(Drive::polynomial({0.0, 1.0}), 2.0) == 2.0);
  CHECK(drive_eval(Drive::polynomial({0.0, 0.0, 1.0}), 2.0) == 4.0);

  std::vector<double> ts, fs;
  for (int k = -20; k <= 20; ++k) {
    ts.push_back(0.1 * k);
    fs.push_back(std::cos(0.1 * k));
  }
  const Drive s = Drive::sampled(ts, fs);
  CHECK(drive_eval(s, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(drive_eval(s, 0.55) == doctest::Approx(std::cos(0.55)).epsilon(1e-4));
  CHECK_THROWS_AS(drive_eval(s, 2.5), RangeError);
  CHECK_THROWS_AS(drive_eval(s, -2.1), RangeError);
}

TEST_CASE("sampled drive validation") {
  CHECK_THROWS_AS(Drive::sampled({0.0, 1.0}, {0.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(Drive::sampled({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(Drive::sampled({0.0, 1.0, 2.0}, {0.0, 1.0}), InvalidArgument);
}

TEST_CASE("time parity is decided exactly for closed-form drives") {
  CHECK(Drive::constant(3.0).is_even_in_time() == true);
  CHECK(Drive::polynomial({1.0, 0.0, 2.0}).is_even_in_time() == true);
  CHECK(Drive::polynomial({0.0, 1.0}).is_even_in_time() == false);
  CHECK_FALSE(Drive::sampled({0.0, 1.0, 2.0}, {0.0, 1.0, 4.0}).is_even_in_time().has_value());
}

TEST_CASE("spatial grid") {
  const SpatialGrid g(-12.0, 12.0, 2401);
  CHECK(g.spacing() == doctest::Approx(0.01));
  CHECK(g.is_symmetric());
  for (int i = 0; i < g.size(); ++i) REQUIRE(g.x(i) == -g.x(g.size() - 1 - i));
  CHECK(g.x(1200) == 0.0);
  CHECK_FALSE(SpatialGrid(-1.0, 2.0, 5).is_symmetric());
  CHECK_THROWS_AS(SpatialGrid(1.0, 1.0, 5), InvalidArgument);
  CHECK_THROWS_AS(SpatialGrid(-1.0, 1.0, 2), InvalidArgument);
}

TEST_CASE("grid state invariants") {
  const SpatialGrid g(-1.0, 1.0, 3);
  CHECK_THROWS_AS(GridState(g, 0.0, {complex{1.0}}), InvalidArgument);
  CHECK_THROWS_AS(GridState(g, 0.0, {complex{}, complex{}, complex{}}), InvalidArgument);
  const GridState s(g, 0.0, {complex{0.5}, complex{0.0, 2.0}, complex{1.0}});
  CHECK(s.max_abs() == 2.0);
  CHECK(s.endpoint_ratio() == 0.5);
}

TEST_CASE("complex energy rejects non-finite components") {
  CHECK_THROWS_AS(ComplexEnergy(std::nan(""), 0.0), InvalidArgument);
  CHECK(ComplexEnergy(complex(1.0, 2.0)).im == 2.0);
}
