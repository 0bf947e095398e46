#include <doctest.h>

#include <cmath>
#include <vector>

#include "abp/integrators.hpp"
#include "abp/rng.hpp"

using namespace abp;

TEST_CASE("em step: zero drift and zero noise leave the state alone") {
  std::vector<double> x = {0.4, -1.2};
  std::vector<double> drift = {0.0, 0.0};
  std::vector<std::uint8_t> periodic = {1, 0};
  RngStream rng(1, 0);
  rng.set_zero_noise(true);
  em_step(x, drift, periodic, 0.1, rng);
  CHECK(x[0] == 0.4);
  CHECK(x[1] == -1.2);
}

TEST_CASE("em step wraps periodic coordinates") {
  std::vector<double> x = {0.8, 0.2};
  std::vector<double> drift = {1.0, 0.0};
  std::vector<std::uint8_t> periodic = {1, 1};
  RngStream rng(1, 0);
  rng.set_zero_noise(true);
  em_step(x, drift, periodic, 0.5, rng);
  CHECK(x[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(0.2).epsilon(1e-12));
}

namespace {
// Monte-Carlo stationary variance of the Euler chain for dX = -X dt + sqrt(2) dW.
double ou_variance(double dt, double t_final, std::uint64_t stream) {
  RngStream rng(777, stream);
  std::vector<double> x = {0.0};
  std::vector<double> drift = {0.0};
  std::vector<std::uint8_t> periodic = {0};
  long steps = static_cast<long>(t_final / dt);
  long burn = steps / 10;
  double s2 = 0.0;
  long count = 0;
  for (long k = 0; k < steps; ++k) {
    drift[0] = -x[0];
    em_step(x, drift, periodic, dt, rng);
    if (k >= burn) {
      s2 += x[0] * x[0];
      ++count;
    }
  }
  return s2 / count;
}
} // namespace

TEST_CASE("em step samples the OU stationary variance") {
  double var = ou_variance(1e-3, 2000.0, 0);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("em weak accuracy improves when dt is halved") {
  // Exact Euler-chain variance is 1/(1 - dt/2); with dt this coarse the
  // discretization error dominates the Monte-Carlo noise over 8 replicas.
  auto mean_err = [&](double dt) {
    double acc = 0.0;
    for (int r = 0; r < 8; ++r) acc += std::abs(ou_variance(dt, 2000.0, 100 + r) - 1.0);
    return acc / 8;
  };
  CHECK(mean_err(0.1) < mean_err(0.2));
}

TEST_CASE("baoab free flight") {
  std::vector<double> q = {0.0}, p = {1.0}, scratch(1);
  std::vector<std::uint8_t> periodic = {1};
  RngStream rng(2, 0);
  rng.set_zero_noise(true);
  auto no_force = [](std::span<const double>, std::span<double> f) { f[0] = 0.0; };
  // gamma = 0 keeps exp(-gamma dt) = 1: straight-line motion
  baoab_step(q, p, no_force, periodic, 0.0, 0.1, rng, scratch);
  CHECK(q[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("baoab momentum halves at gamma = ln2/dt") {
  std::vector<double> q = {0.0}, p = {1.0}, scratch(1);
  std::vector<std::uint8_t> periodic = {1};
  RngStream rng(2, 0);
  rng.set_zero_noise(true);
  auto no_force = [](std::span<const double>, std::span<double> f) { f[0] = 0.0; };
  double dt = 0.1, gamma = std::log(2.0) / dt;
  baoab_step(q, p, no_force, periodic, gamma, dt, rng, scratch);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
  baoab_step(q, p, no_force, periodic, gamma, dt, rng, scratch);
  CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("baoab equilibrates the momentum marginal") {
  std::vector<double> q = {0.0}, p = {0.0}, scratch(1);
  std::vector<std::uint8_t> periodic = {1};
  RngStream rng(3, 0);
  auto force = [](std::span<const double> qq, std::span<double> f) {
    f[0] = 2.0 * M_PI * std::sin(2.0 * M_PI * qq[0]);
  };
  double dt = 1e-3;
  long steps = 2000000, burn = steps / 10;
  double s2 = 0.0;
  long count = 0;
  for (long k = 0; k < steps; ++k) {
    baoab_step(q, p, force, periodic, 1.0, dt, rng, scratch);
    if (k >= burn) {
      s2 += p[0] * p[0];
      ++count;
    }
  }
  CHECK(s2 / count == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("steppers are bitwise deterministic") {
  auto run = [](std::uint64_t seed) {
    RngStream rng(seed, 4);
    std::vector<double> x = {0.1, 0.7};
    std::vector<double> drift = {0.3, -0.2};
    std::vector<std::uint8_t> periodic = {1, 1};
    for (int k = 0; k < 1000; ++k) em_step(x, drift, periodic, 1e-3, rng);
    return x;
  };
  CHECK(run(12) == run(12));
  CHECK(run(12) != run(13));
}

TEST_CASE("scheme parsing") {
  CHECK(StepperConfig::parse_scheme("em") == StepperConfig::Scheme::EulerMaruyama);
  CHECK(StepperConfig::parse_scheme("baoab") == StepperConfig::Scheme::BAOAB);
  CHECK_THROWS(StepperConfig::parse_scheme("rk4"));
}
