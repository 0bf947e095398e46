#include <doctest.h>

#include "abp/config.hpp"
#include "abp/errors.hpp"

using namespace abp;

TEST_CASE("minimal document fills the documented defaults") {
  ExperimentConfig c = ExperimentConfig::parse(
      "[model]\npotential = cosine\ncoefficients = 2.0\n[sim]\nt_final = 10\n");
  CHECK(c.dt == 1e-3);
  CHECK(c.grid_size == 256);
  CHECK(c.kernel_epsilon == 0.05);
  CHECK(c.kernel_alpha == 0.9);
  CHECK(c.norm_kind == "l1");
  CHECK(c.t_final == 10.0);
  EngineSettings s = c.make_engine_settings();
  CHECK(s.scheme == StepperConfig::Scheme::EulerMaruyama);
  CHECK(s.x0 == std::vector<double>{0.5});
}

TEST_CASE("dotted keys outside sections") {
  ExperimentConfig c = ExperimentConfig::parse("kernel.epsilon = 0.1\nsim.t_final = 5\n");
  CHECK(c.kernel_epsilon == 0.1);
  CHECK(c.t_final == 5.0);
}

TEST_CASE("constraint violations carry key paths") {
  try {
    ExperimentConfig::parse("[kernel]\nalpha = 1.5\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "kernel.alpha");
    CHECK(std::string(e.what()).find("(0,1]") != std::string::npos);
  }

  try {
    ExperimentConfig::parse("[spde]\nnonlinearity = cosine\nc = 10\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "spde.c");
    CHECK(std::string(e.what()).find("pi^2") != std::string::npos);
  }
}

TEST_CASE("unknown keys and malformed values are rejected") {
  CHECK_THROWS_AS(ExperimentConfig::parse("[model]\ncolor = red\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("[sim]\ndt = fast\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("[sim]\ndt 0.1\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("[sim]\ndt = 0.1\ndt = 0.2\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("[sim]\nt_final = -3\n"), ConfigError);
}

TEST_CASE("langevin configs pick baoab automatically and refuse em") {
  ExperimentConfig c = ExperimentConfig::parse(
      "[model]\ndynamics = langevin\npotential = cosine\ncoefficients = 1.0\n");
  CHECK(c.make_engine_settings().scheme == StepperConfig::Scheme::BAOAB);
  ExperimentConfig bad = ExperimentConfig::parse(
      "[model]\ndynamics = langevin\npotential = cosine\ncoefficients = 1.0\n"
      "[sim]\nscheme = em\n");
  CHECK_THROWS_AS(run_abp(bad.make_engine_settings()), ConfigError);
}

TEST_CASE("allen-cahn needs the override flag") {
  CHECK_THROWS_AS(
      ExperimentConfig::parse("[spde]\nnonlinearity = allen-cahn\n"), ConfigError);
  ExperimentConfig ok = ExperimentConfig::parse(
      "[spde]\nnonlinearity = allen-cahn\nallow_allen_cahn = true\n");
  CHECK(ok.make_spde_settings().model.kind == SpdeModel::Nonlinearity::AllenCahn);
}

TEST_CASE("spde configs pin the l1 normalization") {
  CHECK_THROWS_AS(ExperimentConfig::parse("[spde]\nmodes = 8\ngrid = 32\n[norm]\nkind = max\n"),
                  ConfigError);
}

TEST_CASE("step cap") {
  CHECK_THROWS_AS(
      ExperimentConfig::parse("[sim]\ndt = 1e-9\nt_final = 1000\n"), ConfigError);
}

TEST_CASE("comments and echo round trip") {
  ExperimentConfig c = ExperimentConfig::parse(
      "# comment line\n[model] ; trailing\npotential = cosine # inline\n"
      "coefficients = 1.0, -0.5\n");
  CHECK(c.coefficients == std::vector<double>{1.0, -0.5});
  auto echo = c.echo();
  bool found = false;
  for (const auto& [k, v] : echo)
    if (k == "model.coefficients") found = (v == "1,-0.5");
  CHECK(found);
}
