#include <doctest.h>

#include <cmath>
#include <vector>

#include "abp/errors.hpp"
#include "abp/geometry.hpp"
#include "abp/rng.hpp"

using namespace abp;

TEST_CASE("wrap maps into [0,1)") {
  CHECK(wrap(std::vector<double>{1.25}).coords[0] == doctest::Approx(0.25));
  CHECK(wrap(std::vector<double>{-0.1}).coords[0] == doctest::Approx(0.9));
  auto p = wrap(std::vector<double>{0.0, 2.0});
  CHECK(p.coords[0] == 0.0);
  CHECK(p.coords[1] == 0.0);

  CHECK(wrap1(-1e-18) < 1.0);
  CHECK(wrap1(-1e-18) >= 0.0);
  CHECK_THROWS_AS(wrap(std::vector<double>{std::nan("")}), DomainError);
}

TEST_CASE("wrap is idempotent") {
  RngStream rng(7, 0);
  for (int i = 0; i < 200; ++i) {
    double x = 20.0 * rng.uniform() - 10.0;
    double once = wrap1(x);
    CHECK(wrap1(once) == once);
    CHECK(once >= 0.0);
    CHECK(once < 1.0);
  }
}

TEST_CASE("periodic displacement takes the shortest arc") {
  CHECK(periodic_displacement1(0.9, 0.1) == doctest::Approx(-0.2));
  CHECK(periodic_displacement1(0.37, 0.37) == 0.0);
  // antipodal tie resolves to the lower end of the half-open interval
  CHECK(periodic_displacement1(0.0, 0.5) == -0.5);
  CHECK(periodic_displacement1(0.5, 0.0) == -0.5);
}

TEST_CASE("periodic displacement bounds and antisymmetry") {
  RngStream rng(11, 0);
  for (int i = 0; i < 300; ++i) {
    double a = rng.uniform(), b = rng.uniform();
    double d = periodic_displacement1(a, b);
    CHECK(d >= -0.5);
    CHECK(d < 0.5);
    double fwd = d, back = periodic_displacement1(b, a);
    if (std::abs(fwd) != 0.5 && std::abs(back) != 0.5)
      CHECK(fwd == doctest::Approx(-back).epsilon(1e-12));
    // congruent to a-b mod 1
    double diff = (a - b) - d;
    CHECK(std::abs(diff - std::round(diff)) < 1e-12);
  }
  CHECK_THROWS_AS(periodic_displacement(TorusPoint({0.1}), TorusPoint({0.1, 0.2})),
                  DomainError);
}

TEST_CASE("pairwise mean is exact for constant power-of-two input") {
  std::vector<double> v(256, 0.1);
  CHECK(pairwise_mean(v) == 0.1);
  std::vector<double> w(64, 1.0 + 1e-3);
  CHECK(pairwise_mean(w) == 1.0 + 1e-3);
}
