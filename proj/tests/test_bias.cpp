#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "abp/bias.hpp"
#include "abp/errors.hpp"
#include "abp/geometry.hpp"
#include "abp/rng.hpp"

using namespace abp;

namespace {
KernelSpec default_kernel() { return KernelSpec::wrapped_gaussian(1, 0.05, 0.9); }
} // namespace

TEST_CASE("constant kernel: flat accumulation, zero bias") {
  BiasGrid grid(KernelSpec::constant(1), NormalizationSpec::l1(),
                InitialMeasure::single_atom({0.37}), 128);
  for (double h : grid.h().v) CHECK(h == 1.0);
  for (double a : grid.A().v) CHECK(a == 0.0);
}

TEST_CASE("uniform initial measure gives unit accumulation for any kernel") {
  BiasGrid grid(default_kernel(), NormalizationSpec::l1(),
                InitialMeasure::uniform_measure(), 256);
  for (double h : grid.h().v) CHECK(std::abs(h - 1.0) <= 1e-10);
}

TEST_CASE("single atom: bias is minus log of the deposited density") {
  const int G = 256;
  BiasGrid grid(default_kernel(), NormalizationSpec::l1(),
                InitialMeasure::single_atom({0.5}), G);
  std::vector<double> row(G);
  double zeta[1] = {0.5};
  kernel_row(default_kernel(), G, std::span<const double>(zeta, 1), row);
  double mean = pairwise_mean(row);
  int argmin = 0;
  for (int g = 0; g < G; ++g) {
    CHECK(grid.A().v[g] == doctest::Approx(-std::log(row[g] / mean)).epsilon(1e-12));
    if (grid.A().v[g] < grid.A().v[argmin]) argmin = g;
  }
  CHECK(argmin == G / 2); // A dips where the density peaks
}

TEST_CASE("constant kernel: deposits never move the bias (bitwise)") {
  BiasGrid grid(KernelSpec::constant(1), NormalizationSpec::l1(),
                InitialMeasure::single_atom({0.2}), 256);
  GridFunction a0 = grid.A();
  RngStream rng(51, 0);
  for (int k = 0; k < 500; ++k) {
    double z[1] = {rng.uniform()};
    double w = grid.weight(std::span<const double>(z, 1));
    grid.deposit(std::span<const double>(z, 1), w, 1e-3);
  }
  CHECK(std::memcmp(grid.A().v.data(), a0.v.data(), a0.v.size() * sizeof(double)) == 0);
}

TEST_CASE("repeated deposits at one point concentrate the density") {
  BiasGrid grid(default_kernel(), NormalizationSpec::l1(),
                InitialMeasure::uniform_measure(), 128);
  double z[1] = {0.5};
  double prev = grid.F().interp1(0.5) / grid.F().mean();
  for (int n = 0; n < 5; ++n) {
    grid.deposit(std::span<const double>(z, 1), grid.weight(std::span<const double>(z, 1)),
                 1.0);
    double now = grid.F().interp1(0.5) / grid.F().mean();
    CHECK(now > prev);
    prev = now;
  }
}

TEST_CASE("theta accumulates w*dt") {
  BiasGrid grid(KernelSpec::constant(1), NormalizationSpec::l1(),
                InitialMeasure::single_atom({0.5}), 64);
  double z[1] = {0.25};
  grid.deposit(std::span<const double>(z, 1), 1.0, 0.5);
  grid.deposit(std::span<const double>(z, 1), 1.0, 0.25);
  grid.deposit(std::span<const double>(z, 1), 1.0, 0.25);
  CHECK(grid.theta() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("bias interpolation: nodes exact, midpoints average") {
  GridFunction a(1, 8);
  for (int g = 0; g < 8; ++g) a.v[g] = 0.1 * g;
  BiasGrid grid = BiasGrid::frozen(a, NormalizationSpec::l1());
  // frozen bias recenters A additively; interpolation structure is unchanged
  double base = grid.A().v[0];
  double z[1] = {2.0 / 8.0};
  CHECK(grid.bias_value(std::span<const double>(z, 1)) ==
        doctest::Approx(base + 0.2).epsilon(1e-13));
  z[0] = 2.5 / 8.0;
  CHECK(grid.bias_value(std::span<const double>(z, 1)) ==
        doctest::Approx(base + 0.25).epsilon(1e-13));

  GridFunction c(1, 16, 0.7);
  BiasGrid cgrid = BiasGrid::frozen(c, NormalizationSpec::l1());
  RngStream rng(52, 0);
  for (int i = 0; i < 20; ++i) {
    double zz[1] = {rng.uniform()};
    CHECK(cgrid.bias_value(std::span<const double>(zz, 1)) ==
          doctest::Approx(0.0).epsilon(1e-14)); // constant bias recenters to zero
  }
}

TEST_CASE("bias gradient: centered differences at spectral accuracy") {
  const int G = 256;
  GridFunction a(1, G);
  for (int g = 0; g < G; ++g) a.v[g] = std::sin(2.0 * M_PI * g / G);
  BiasGrid grid = BiasGrid::frozen(a, NormalizationSpec::l1());
  double z[1] = {0.0}, g1[1];
  grid.bias_gradient(std::span<const double>(z, 1), g1);
  CHECK(g1[0] == doctest::Approx(2.0 * M_PI).epsilon(1e-3 / (2.0 * M_PI)));

  GridFunction c(1, 64, 1.3);
  BiasGrid cgrid = BiasGrid::frozen(c, NormalizationSpec::l1());
  z[0] = 0.4;
  cgrid.bias_gradient(std::span<const double>(z, 1), g1);
  CHECK(g1[0] == 0.0);
}

TEST_CASE("a-priori bounds hold along a random deposit stream") {
  for (const NormalizationSpec& norm :
       {NormalizationSpec::l1(), NormalizationSpec::lq(2.0), NormalizationSpec::max()}) {
    BiasGrid grid(default_kernel(), norm, InitialMeasure::single_atom({0.3}), 128);
    RngStream rng(53, 1);
    double a_cap = std::log(grid.bound_M0() / grid.bound_m()) + 1e-9;
    for (int k = 0; k < 2000; ++k) {
      double z[1] = {rng.uniform()};
      double w = grid.weight(std::span<const double>(z, 1));
      CHECK(w >= grid.bound_m() * (1 - 1e-12));
      CHECK(w <= grid.bound_M0() * (1 + 1e-12));
      grid.deposit(std::span<const double>(z, 1), w, 1e-2);
    }
    for (double f : grid.F().v) {
      CHECK(f >= grid.bound_m() * (1 - 1e-12));
      CHECK(f <= grid.bound_M0() * (1 + 1e-12));
    }
    for (double a : grid.A().v) CHECK(std::abs(a) <= a_cap);
    GridFunction fbar = prob_density(grid.F());
    CHECK(fbar.mean() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("one deposit moves the normalized accumulation by the exact mixing rule") {
  const int G = 128;
  BiasGrid grid(default_kernel(), NormalizationSpec::l1(),
                InitialMeasure::single_atom({0.6}), G);
  RngStream rng(54, 0);
  for (int k = 0; k < 20; ++k) {
    double z[1] = {rng.uniform()};
    double w = grid.weight(std::span<const double>(z, 1));
    double dt = 1e-2;
    std::vector<double> kappa_old(G);
    double theta_old = grid.theta();
    for (int g = 0; g < G; ++g) kappa_old[g] = grid.h().v[g] / (1.0 + theta_old);
    std::vector<double> row(G);
    kernel_row(grid.kernel(), G, std::span<const double>(z, 1), row);

    grid.deposit(std::span<const double>(z, 1), w, dt);
    double theta_new = grid.theta();
    for (int g = 0; g < G; ++g) {
      double kappa_new = grid.h().v[g] / (1.0 + theta_new);
      double predicted =
          kappa_old[g] + (w * dt / (1.0 + theta_new)) * (row[g] - kappa_old[g]);
      CHECK(kappa_new == doctest::Approx(predicted).epsilon(1e-12));
    }
  }
}

TEST_CASE("two-dimensional grids refresh and stay in bounds") {
  KernelSpec k2 = KernelSpec::wrapped_gaussian(2, 0.1, 0.9);
  BiasGrid grid(k2, NormalizationSpec::l1(), InitialMeasure::single_atom({0.5, 0.5}), 32,
                /*refresh_stride=*/4);
  RngStream rng(55, 0);
  for (int k = 0; k < 200; ++k) {
    double z[2] = {rng.uniform(), rng.uniform()};
    double w = grid.weight(std::span<const double>(z, 2));
    grid.deposit(std::span<const double>(z, 2), w, 1e-2);
  }
  grid.refresh();
  GridFunction fbar = prob_density(grid.F());
  CHECK(fbar.mean() == doctest::Approx(1.0).epsilon(1e-10));
  double g2[2];
  double z[2] = {0.21, 0.77};
  grid.bias_gradient(std::span<const double>(z, 2), g2);
  CHECK(std::isfinite(g2[0]));
  CHECK(std::isfinite(g2[1]));
}

TEST_CASE("deposit argument validation") {
  BiasGrid grid(default_kernel(), NormalizationSpec::l1(),
                InitialMeasure::single_atom({0.5}), 64);
  double z[1] = {0.5};
  CHECK_THROWS_AS(grid.deposit(std::span<const double>(z, 1), 0.0, 1e-3), DomainError);
  CHECK_THROWS_AS(grid.deposit(std::span<const double>(z, 1), 1.0, -1e-3), DomainError);
  CHECK_THROWS_AS(grid.deposit(std::span<const double>(z, 1), 1e9, 1e-3), InvariantError);

  GridFunction a(1, 64, 0.0);
  BiasGrid frozen = BiasGrid::frozen(a, NormalizationSpec::l1());
  CHECK_THROWS_AS(frozen.deposit(std::span<const double>(z, 1), 1.0, 1e-3), DomainError);

  CHECK_THROWS_AS(BiasGrid(default_kernel(), NormalizationSpec::l1(), InitialMeasure{}, 64),
                  DomainError); // empty atom list
}
