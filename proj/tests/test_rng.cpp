#include <doctest.h>

#include <cmath>
#include <vector>

#include "abp/rng.hpp"

using namespace abp;

TEST_CASE("identical (seed, stream) gives identical draws") {
  RngStream a(42, 3), b(42, 3);
  for (int i = 0; i < 1000; ++i) CHECK(a.normal() == b.normal());
}

TEST_CASE("distinct streams decorrelate") {
  RngStream a(42, 0), b(42, 1);
  const int n = 100000;
  double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    double x = a.normal(), y = b.normal();
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  double mx = sx / n, my = sy / n;
  double cov = sxy / n - mx * my;
  double rho = cov / std::sqrt((sxx / n - mx * mx) * (syy / n - my * my));
  CHECK(std::abs(rho) <= 0.05);
}

TEST_CASE("normals have the right first moments") {
  RngStream rng(5, 0);
  const int n = 200000;
  double s = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    double x = rng.normal();
    s += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("zero-noise mode returns zeros but keeps the stream aligned") {
  RngStream a(9, 0), b(9, 0);
  a.set_zero_noise(true);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == 0.0);
  a.set_zero_noise(false);
  for (int i = 0; i < 10; ++i) b.normal();
  CHECK(a.normal() == b.normal());
}
