#include <doctest.h>

#include <cmath>
#include <vector>

#include "abp/errors.hpp"
#include "abp/model.hpp"
#include "abp/rng.hpp"

using namespace abp;

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Centered finite difference of the potential.
double fd_grad(const Potential& v, std::vector<double> x, int axis, double h = 1e-6) {
  x[axis] += h;
  double up = v.value(x);
  x[axis] -= 2 * h;
  double dn = v.value(x);
  return (up - dn) / (2 * h);
}

std::vector<Potential> presets() {
  return {Potential::cosine1({1.0}),
          Potential::cosine1({2.0, -0.5, 0.25}),
          Potential::cosine2(2.0, 0.0, 0.5),
          Potential::quadratic_cosine(2, 1.0, 0.3),
          Potential::tabulated([] {
            std::vector<double> s(64);
            for (int g = 0; g < 64; ++g)
              s[g] = std::cos(kTwoPi * g / 64.0) + 0.3 * std::cos(2 * kTwoPi * g / 64.0);
            return s;
          }())};
}

} // namespace

TEST_CASE("gradients match centered finite differences on every preset") {
  RngStream rng(31, 0);
  for (const auto& v : presets()) {
    std::vector<double> x(v.dim), g(v.dim);
    for (int trial = 0; trial < 100; ++trial) {
      for (double& c : x) c = v.periodic_domain ? rng.uniform() : 4.0 * rng.uniform() - 2.0;
      v.gradient(x, g);
      for (int axis = 0; axis < v.dim; ++axis) {
        double fd = fd_grad(v, x, axis);
        double scale = std::max(1.0, std::abs(fd));
        CHECK(std::abs(g[axis] - fd) / scale <= 1e-6);
      }
    }
  }
}

TEST_CASE("tabulated preset reproduces its band-limited generator") {
  auto v = presets()[4];
  RngStream rng(32, 0);
  for (int i = 0; i < 50; ++i) {
    double x = rng.uniform();
    double expect = std::cos(kTwoPi * x) + 0.3 * std::cos(2 * kTwoPi * x);
    double dexpect = -kTwoPi * std::sin(kTwoPi * x) -
                     0.6 * kTwoPi * std::sin(2 * kTwoPi * x);
    std::vector<double> xx = {x}, g(1);
    CHECK(v.value(xx) == doctest::Approx(expect).epsilon(1e-10));
    v.gradient(xx, g);
    CHECK(g[0] == doctest::Approx(dexpect).epsilon(1e-9));
  }
}

TEST_CASE("brownian drift at a quarter period") {
  DynamicsSpec dyn;
  dyn.family = DynamicsSpec::Family::Brownian;
  dyn.potential = Potential::cosine1({1.0});
  dyn.xi.m = 1;
  ZeroBias none;
  std::vector<double> x = {0.25}, out(1);
  dyn.drift(x, none, out);
  CHECK(out[0] == doctest::Approx(kTwoPi).epsilon(1e-12));
  // cross-check against the finite difference of V itself
  CHECK(out[0] == doctest::Approx(-fd_grad(dyn.potential, x, 0)).epsilon(1e-6));
}

TEST_CASE("langevin drift is pure friction for a free particle") {
  DynamicsSpec dyn;
  dyn.family = DynamicsSpec::Family::Langevin;
  dyn.potential = Potential::cosine1({});
  dyn.xi.m = 1;
  dyn.gamma = 1.0;
  ZeroBias none;
  std::vector<double> state = {0.3, 2.0}, out(2);
  dyn.drift(state, none, out);
  CHECK(out[0] == 2.0);
  CHECK(out[1] == -2.0);
}

TEST_CASE("extended drift matches the hand evaluation and the energy gradient") {
  DynamicsSpec dyn;
  dyn.family = DynamicsSpec::Family::Extended;
  dyn.potential = Potential::cosine1({});
  dyn.xi.m = 1;
  dyn.eps_ext = 0.5;
  ZeroBias none;
  std::vector<double> state = {0.2, 0.3}, out(2);
  dyn.drift(state, none, out);
  CHECK(out[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(-0.2).epsilon(1e-12));

  // drift = -grad U: compare against finite differences of the total energy
  dyn.potential = Potential::cosine1({0.7});
  RngStream rng(33, 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s = {rng.uniform(), rng.uniform()};
    dyn.drift(s, none, out);
    for (int axis = 0; axis < 2; ++axis) {
      std::vector<double> sp = s, sm = s;
      sp[axis] += 1e-6;
      sm[axis] -= 1e-6;
      double fd = (dyn.total_energy(sp, none) - dyn.total_energy(sm, none)) / 2e-6;
      CHECK(out[axis] == doctest::Approx(-fd).epsilon(2e-5));
    }
  }
}

TEST_CASE("extended drift sees the bias on the auxiliary variable") {
  DynamicsSpec dyn;
  dyn.family = DynamicsSpec::Family::Extended;
  dyn.potential = Potential::cosine1({});
  dyn.xi.m = 1;
  dyn.eps_ext = 0.5;
  AnalyticBias bias([](std::span<const double> z) { return std::cos(kTwoPi * z[0]); },
                    [](std::span<const double> z, std::span<double> g) {
                      g[0] = -kTwoPi * std::sin(kTwoPi * z[0]);
                    });
  std::vector<double> state = {0.2, 0.3}, out(2);
  dyn.drift(state, bias, out);
  CHECK(out[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(-0.2 - kTwoPi * std::sin(kTwoPi * 0.3)).epsilon(1e-12));
}

TEST_CASE("total energy per family") {
  ZeroBias none;
  DynamicsSpec lan;
  lan.family = DynamicsSpec::Family::Langevin;
  lan.potential = Potential::cosine1({});
  lan.xi.m = 1;
  CHECK(lan.total_energy(std::vector<double>{0.1, 3.0}, none) == doctest::Approx(4.5));

  DynamicsSpec bro;
  bro.family = DynamicsSpec::Family::Brownian;
  bro.potential = Potential::cosine1({1.0});
  bro.xi.m = 1;
  CHECK(bro.total_energy(std::vector<double>{0.0}, none) == doctest::Approx(1.0));

  bro.potential = Potential::cosine1({});
  AnalyticBias one([](std::span<const double>) { return 1.0; },
                   [](std::span<const double>, std::span<double> g) { g[0] = 0.0; });
  CHECK(bro.total_energy(std::vector<double>{0.42}, one) == doctest::Approx(-1.0));
}

TEST_CASE("collective variable per family") {
  DynamicsSpec bro;
  bro.family = DynamicsSpec::Family::Brownian;
  bro.potential = Potential::cosine2(1.0, 0.0, 0.0);
  bro.xi.m = 1;
  double z[1];
  bro.xi_state(std::vector<double>{0.7, 0.1}, z);
  CHECK(z[0] == doctest::Approx(0.7));

  DynamicsSpec lan;
  lan.family = DynamicsSpec::Family::Langevin;
  lan.potential = Potential::cosine2(1.0, 0.0, 0.0);
  lan.xi.m = 1;
  lan.xi_state(std::vector<double>{0.7, 0.1, 5.0, -3.0}, z);
  CHECK(z[0] == doctest::Approx(0.7));

  DynamicsSpec ext;
  ext.family = DynamicsSpec::Family::Extended;
  ext.potential = Potential::cosine1({1.0});
  ext.xi.m = 1;
  ext.xi_state(std::vector<double>{0.9, 0.42}, z);
  CHECK(z[0] == doctest::Approx(0.42));
}

TEST_CASE("beta scales the potential") {
  Potential v1 = Potential::cosine1({2.0}, 1.0);
  Potential v2 = Potential::cosine1({2.0}, 0.5);
  std::vector<double> x = {0.3};
  CHECK(v2.value(x) == doctest::Approx(0.5 * v1.value(x)));
}

TEST_CASE("confinement validation for the euclidean preset") {
  CHECK_THROWS_AS(Potential::quadratic_cosine(1, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(Potential::quadratic_cosine(1, -2.0, 1.0), ConfigError);
}
