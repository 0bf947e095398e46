#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "abp/errors.hpp"
#include "abp/spde.hpp"

using namespace abp;

TEST_CASE("colvar of the spectral state") {
  SpectralState u(32, 128);
  CHECK(xi_spde(u) == 0.5);

  u.modes[0] = 1.0;
  double ubar = 2.0 * std::sqrt(2.0) / M_PI;
  CHECK(spde_spatial_average(u) == doctest::Approx(ubar).epsilon(1e-12));
  CHECK(std::abs(ubar - 0.900316) < 1e-6); // frozen literal
  double xi = 0.5 + std::atan(0.5 * ubar) / M_PI;
  CHECK(xi_spde(u) == doctest::Approx(xi).epsilon(1e-14));
  CHECK(std::abs(xi - 0.634640) < 1e-6); // frozen: arctan evaluation

  // mass of the first basis function, verified by quadrature
  const int Q = 200001;
  double acc = 0.0;
  for (int j = 1; j < Q; ++j) {
    double x = static_cast<double>(j) / Q;
    acc += std::sqrt(2.0) * std::sin(M_PI * x);
  }
  CHECK(acc / Q == doctest::Approx(ubar).epsilon(1e-8));

  u.modes[0] = 1e9; // arctan keeps the colvar inside the torus
  CHECK(xi_spde(u) < 1.0);
  CHECK(xi_spde(u) > 0.99);
}

TEST_CASE("discrete sine transform round trip is exact for retained modes") {
  const int N = 32, P = 128;
  RngStream rng(71, 0);
  std::vector<double> modes(N);
  for (double& m : modes) m = rng.normal();
  auto grid = sine_synthesize(modes, P);
  auto back = sine_analyze(grid, N);
  for (int n = 0; n < N; ++n) CHECK(back[n] == doctest::Approx(modes[n]).epsilon(1e-10));
}

TEST_CASE("pure linear decay without noise") {
  SpdeSystem sys(SpdeModel::cosine(0.0), 32, 128);
  sys.state().modes[0] = 1.0;
  GridFunction zero(1, 64, 0.0);
  BiasGrid frozen = BiasGrid::frozen(zero, NormalizationSpec::l1());
  RngStream rng(72, 0);
  rng.set_zero_noise(true);
  double dt = 1e-3;
  sys.step(frozen, dt, rng);
  CHECK(sys.state().modes[0] == 1.0 / (1.0 + dt * M_PI * M_PI));
  for (int n = 1; n < 32; ++n) CHECK(sys.state().modes[n] == 0.0);
  sys.step(frozen, dt, rng);
  CHECK(sys.state().modes[0] ==
        doctest::Approx(std::pow(1.0 + dt * M_PI * M_PI, -2.0)).epsilon(1e-15));
}

TEST_CASE("short flat run reproduces the gaussian mode variances loosely") {
  SpdeSettings s;
  s.model = SpdeModel::cosine(0.0);
  s.n_modes = 16;
  s.grid_points = 64;
  s.kernel = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  s.grid_size = 128;
  s.dt = 1e-3;
  s.t_final = 50.0;
  s.seed = 73;
  s.observables = {Observable::parse("u1"), Observable::parse("u1sq"),
                   Observable::parse("u2"), Observable::parse("u2sq")};
  GridFunction zero(1, s.grid_size, 0.0);
  RunReport r = run_spde_fixed_bias(s, zero);
  for (int n = 1; n <= 2; ++n) {
    double mean = r.rho_bar[2 * (n - 1)];
    double var = r.rho_bar[2 * (n - 1) + 1] - mean * mean;
    CHECK(var * n * n * M_PI * M_PI == doctest::Approx(1.0).epsilon(0.25));
  }
}

TEST_CASE("moment diagnostic stays bounded on a short biased run") {
  SpdeSettings s;
  s.model = SpdeModel::cosine(1.0);
  s.n_modes = 16;
  s.grid_points = 64;
  s.kernel = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  s.grid_size = 128;
  s.dt = 1e-3;
  s.t_final = 20.0;
  s.seed = 74;
  s.observables = {Observable::parse("xi")};
  RunReport r = run_spde_abp(s);
  CHECK(std::isfinite(r.max_norm2));
  CHECK(r.max_norm2 < 50.0);
  CHECK(r.mu_bar[0] > 0.0);
  CHECK(r.mu_bar[0] < 1.0);
}

TEST_CASE("constant kernel degeneracy holds for the spde loop") {
  SpdeSettings s;
  s.model = SpdeModel::cosine(0.5);
  s.n_modes = 8;
  s.grid_points = 32;
  s.kernel = KernelSpec::constant(1);
  s.grid_size = 64;
  s.dt = 1e-3;
  s.t_final = 5.0;
  s.seed = 75;
  s.observables = {Observable::parse("xi")};
  RunReport r = run_spde_abp(s);
  BiasGrid probe(KernelSpec::constant(1), NormalizationSpec::l1(),
                 InitialMeasure::single_atom({0.5}), 64);
  CHECK(std::memcmp(r.bias_A.v.data(), probe.A().v.data(),
                    probe.A().v.size() * sizeof(double)) == 0);
}

TEST_CASE("dissipativity gate and allen-cahn override") {
  CHECK_THROWS_AS(SpdeModel::cosine(10.0), ConfigError);
  CHECK_THROWS_AS(SpdeModel::cosine(M_PI * M_PI), ConfigError);
  CHECK_THROWS_AS(SpdeModel::allen_cahn(false), ConfigError);
  SpdeModel ac = SpdeModel::allen_cahn(true);
  CHECK(ac.dV(2.0) == doctest::Approx(6.0));
  CHECK_THROWS_AS(SpectralState(32, 64), ConfigError); // P >= 4N
}
