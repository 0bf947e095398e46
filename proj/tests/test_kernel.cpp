#include <doctest.h>

#include <cmath>
#include <vector>

#include "abp/errors.hpp"
#include "abp/geometry.hpp"
#include "abp/kernel.hpp"
#include "abp/rng.hpp"

using namespace abp;

namespace {
double eval1(const KernelSpec& k, double z, double zeta) {
  double zz[1] = {z}, cc[1] = {zeta};
  return kernel_eval(k, std::span<const double>(zz, 1), std::span<const double>(cc, 1));
}
} // namespace

TEST_CASE("near-constant kernel is flat") {
  KernelSpec k = KernelSpec::wrapped_gaussian(1, 0.05, 1e-9);
  RngStream rng(3, 0);
  for (int i = 0; i < 100; ++i) {
    double v = eval1(k, rng.uniform(), rng.uniform());
    CHECK(std::abs(v - 1.0) <= 1e-6);
  }
}

TEST_CASE("pure bump peak matches the Gaussian height and integrates to one") {
  KernelSpec k = KernelSpec::wrapped_gaussian(1, 0.05, 1.0);
  // wrap correction is negligible at this width
  double peak = eval1(k, 0.3, 0.3);
  CHECK(peak == doctest::Approx(1.0 / (0.05 * std::sqrt(2.0 * M_PI))).epsilon(1e-3 / 8));
  CHECK(std::abs(peak - 7.9788) < 1e-3);

  // quadrature check of the normalization condition
  const int R = 8192;
  std::vector<double> vals(R);
  for (int j = 0; j < R; ++j) vals[j] = eval1(k, static_cast<double>(j) / R, 0.3);
  CHECK(pairwise_mean(vals) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("difference kernels are symmetric") {
  KernelSpec k = KernelSpec::wrapped_gaussian(1, 0.1, 0.7);
  RngStream rng(4, 0);
  for (int i = 0; i < 100; ++i) {
    double z = rng.uniform(), zeta = rng.uniform();
    CHECK(eval1(k, z, zeta) == doctest::Approx(eval1(k, zeta, z)).epsilon(1e-12));
  }
}

TEST_CASE("normalization holds for random centers at grid resolution") {
  KernelSpec k = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  const int G = 256;
  std::vector<double> row(G);
  RngStream rng(5, 0);
  for (int trial = 0; trial < 64; ++trial) {
    double zeta[1] = {rng.uniform()};
    kernel_row(k, G, std::span<const double>(zeta, 1), row);
    CHECK(std::abs(pairwise_mean(row) - 1.0) <= 1e-12);
    for (double v : row) CHECK(v > 0.0);
  }
}

TEST_CASE("kernel constants") {
  KernelSpec flat = KernelSpec::wrapped_gaussian(1, 0.05, 1e-9);
  KernelConstants kc = kernel_min_max(flat, 512);
  CHECK(kc.min_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(kc.max_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(kc.max_deriv <= 1e-6);

  KernelSpec floor = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  kc = kernel_min_max(floor, 512);
  CHECK(kc.min_value >= 1.0 - 0.9); // floor bound, in float arithmetic

  KernelSpec bump = KernelSpec::wrapped_gaussian(1, 0.05, 1.0);
  kc = kernel_min_max(bump, 512);
  CHECK(kc.max_value == doctest::Approx(7.9788).epsilon(2e-4));
  CHECK(kc.min_value > 0.0);
}

TEST_CASE("row of a near-constant kernel is flat; maxima track the center") {
  KernelSpec flat = KernelSpec::wrapped_gaussian(1, 0.2, 1e-9);
  std::vector<double> row(4);
  double zeta[1] = {0.3};
  kernel_row(flat, 4, std::span<const double>(zeta, 1), row);
  for (double v : row) CHECK(std::abs(v - 1.0) <= 1e-6);

  KernelSpec bump = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  const int G = 64;
  std::vector<double> brow(G);
  RngStream rng(6, 0);
  for (int trial = 0; trial < 50; ++trial) {
    double c = rng.uniform();
    double zc[1] = {c};
    kernel_row(bump, G, std::span<const double>(zc, 1), brow);
    int argmax = 0;
    for (int g = 1; g < G; ++g)
      if (brow[g] > brow[argmax]) argmax = g;
    double nearest = std::round(c * G);
    int expect = static_cast<int>(nearest) % G;
    CHECK(argmax == expect);
  }
}

TEST_CASE("Lipschitz continuity in the second variable") {
  KernelSpec k = KernelSpec::wrapped_gaussian(1, 0.08, 0.9);
  double m1 = kernel_min_max(k, 1024).max_deriv;
  RngStream rng(7, 0);
  for (int i = 0; i < 100; ++i) {
    double z = rng.uniform(), z1 = rng.uniform(), z2 = rng.uniform();
    double dist = std::abs(periodic_displacement1(z1, z2));
    if (dist < 1e-9) continue;
    double diff = std::abs(eval1(k, z, z1) - eval1(k, z, z2));
    CHECK(diff <= 1.1 * m1 * dist);
  }
}

TEST_CASE("mixtures stay positive and normalized") {
  KernelSpec narrow = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  KernelSpec wide = KernelSpec::wrapped_gaussian(1, 0.2, 0.8);
  KernelSpec mix = KernelSpec::mixture({narrow, wide});
  const int G = 128;
  std::vector<double> row(G);
  RngStream rng(8, 0);
  for (int trial = 0; trial < 20; ++trial) {
    double zeta[1] = {rng.uniform()};
    kernel_row(mix, G, std::span<const double>(zeta, 1), row);
    CHECK(std::abs(pairwise_mean(row) - 1.0) <= 1e-12);
    for (double v : row) CHECK(v > 0.0);
  }
  // pointwise value is the weighted component sum
  double z = 0.2, zeta = 0.55;
  double w0 = (1.0 + std::cos(2 * M_PI * (zeta - 0.0))) / 2.0;
  double w1 = (1.0 + std::cos(2 * M_PI * (zeta - 0.5))) / 2.0;
  CHECK(eval1(mix, z, zeta) ==
        doctest::Approx(w0 * eval1(narrow, z, zeta) + w1 * eval1(wide, z, zeta))
            .epsilon(1e-12));
}

TEST_CASE("2-d kernel rows are normalized products") {
  KernelSpec k = KernelSpec::wrapped_gaussian(2, 0.1, 0.9);
  const int G = 32;
  std::vector<double> row(static_cast<std::size_t>(G) * G);
  double zeta[2] = {0.3, 0.7};
  kernel_row(k, G, std::span<const double>(zeta, 2), row);
  CHECK(std::abs(pairwise_mean(row) - 1.0) <= 1e-12);
  for (double v : row) CHECK(v > 0.0);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(KernelSpec::wrapped_gaussian(1, 0.05, 1.5), ConfigError);
  CHECK_THROWS_AS(KernelSpec::wrapped_gaussian(1, 0.05, 0.0), ConfigError);
  CHECK_THROWS_AS(KernelSpec::wrapped_gaussian(1, 1.5, 0.9), ConfigError);
  CHECK_THROWS_AS(KernelSpec::wrapped_gaussian(1, 0.05, 0.9, 2), ConfigError);
}
