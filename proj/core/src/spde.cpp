#include "abp/spde.hpp"

#include <cmath>
#include <numbers>

#include "abp/errors.hpp"
#include "abp/geometry.hpp"

namespace abp {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
}

double SpdeModel::dV(double x) const {
  switch (kind) {
    case Nonlinearity::Cosine:
      return -c * std::sin(x);
    case Nonlinearity::AllenCahn:
      return x * x * x - x;
  }
  return 0.0;
}

SpdeModel SpdeModel::cosine(double c) {
  if (!(c < kPi2))
    throw ConfigError("spde.c", "cosine nonlinearity requires c < pi^2 (dissipativity)");
  SpdeModel m;
  m.kind = Nonlinearity::Cosine;
  m.c = c;
  return m;
}

SpdeModel SpdeModel::allen_cahn(bool allow_override) {
  if (!allow_override)
    throw ConfigError("spde.nonlinearity",
                      "allen-cahn violates the dissipativity condition; set "
                      "spde.allow_allen_cahn = true to run it anyway");
  SpdeModel m;
  m.kind = Nonlinearity::AllenCahn;
  m.c = 0.0;
  return m;
}

SpectralState::SpectralState(int n, int p) : n_modes(n), grid_points(p) {
  if (n < 1) throw ConfigError("spde.modes", "need at least one mode");
  if (p < 4 * n) throw ConfigError("spde.grid", "grid points must be >= 4 * modes");
  modes.assign(n, 0.0);
}

double spde_spatial_average(const SpectralState& state) {
  // <e_n, 1> = sqrt(2) (1 - (-1)^n) / (n pi): odd modes only.
  double ubar = 0.0;
  for (int n = 1; n <= state.n_modes; ++n) {
    if (n % 2 == 0) continue;
    ubar += state.modes[n - 1] * (2.0 * std::numbers::sqrt2 / (n * kPi));
  }
  return ubar;
}

double xi_spde(const SpectralState& state) {
  return 0.5 + std::atan(0.5 * spde_spatial_average(state)) / kPi;
}

std::vector<double> sine_synthesize(std::span<const double> modes, int grid_points) {
  int P = grid_points;
  std::vector<double> out(P - 1, 0.0);
  for (int j = 1; j < P; ++j) {
    double acc = 0.0;
    for (std::size_t n = 1; n <= modes.size(); ++n)
      acc += modes[n - 1] * std::numbers::sqrt2 * std::sin(n * kPi * j / P);
    out[j - 1] = acc;
  }
  return out;
}

std::vector<double> sine_analyze(std::span<const double> grid_values, int n_modes) {
  int P = static_cast<int>(grid_values.size()) + 1;
  std::vector<double> modes(n_modes, 0.0);
  for (int n = 1; n <= n_modes; ++n) {
    double acc = 0.0;
    for (int j = 1; j < P; ++j)
      acc += grid_values[j - 1] * std::numbers::sqrt2 * std::sin(n * kPi * j / P);
    modes[n - 1] = acc / P;
  }
  return modes;
}

SpdeSystem::SpdeSystem(SpdeModel model, int n_modes, int grid_points)
    : model_(model), state_(n_modes, grid_points) {
  int N = n_modes, P = grid_points;
  basis_.resize(static_cast<std::size_t>(N) * (P - 1));
  for (int n = 1; n <= N; ++n)
    for (int j = 1; j < P; ++j)
      basis_[static_cast<std::size_t>(n - 1) * (P - 1) + (j - 1)] =
          std::numbers::sqrt2 * std::sin(n * kPi * j / P);
  mode_mass_.resize(N);
  lambda_.resize(N);
  for (int n = 1; n <= N; ++n) {
    mode_mass_[n - 1] = (n % 2 == 1) ? 2.0 * std::numbers::sqrt2 / (n * kPi) : 0.0;
    lambda_[n - 1] = static_cast<double>(n) * n * kPi2;
  }
  grid_buf_.resize(P - 1);
  force_buf_.resize(N);
}

void SpdeSystem::colvar(std::span<double> z) const { z[0] = xi_spde(state_); }

double SpdeSystem::observe(const Observable& obs) const {
  switch (obs.kind) {
    case Observable::Kind::One:
      return 1.0;
    case Observable::Kind::SpdeMode:
      if (obs.k > state_.n_modes)
        throw DomainError("observable " + obs.name + ": mode beyond truncation");
      return state_.modes[obs.k - 1];
    case Observable::Kind::SpdeModeSq: {
      if (obs.k > state_.n_modes)
        throw DomainError("observable " + obs.name + ": mode beyond truncation");
      double u = state_.modes[obs.k - 1];
      return u * u;
    }
    case Observable::Kind::SpdeUbar:
      return spde_spatial_average(state_);
    case Observable::Kind::SpdeUbarSq: {
      double u = spde_spatial_average(state_);
      return u * u;
    }
    case Observable::Kind::SpdeXi:
      return xi_spde(state_);
    default:
      throw DomainError("observable " + obs.name + ": not defined on spectral states");
  }
}

double SpdeSystem::norm2() const {
  double s = 0.0;
  for (double u : state_.modes) s += u * u;
  return s;
}

void SpdeSystem::step(const BiasGrid& bias, double dt, RngStream& rng) {
  advance(bias, dt, rng, -1, 0.0);
}

void SpdeSystem::advance(const BiasGrid& bias, double dt, RngStream& rng, long step,
                         double time) {
  const int N = state_.n_modes, P = state_.grid_points;

  // Pseudo-spectral nonlinearity: synthesize on the interior grid, apply
  // -V' pointwise, project back (the discrete sine transform is exactly
  // orthogonal on this grid).
  for (int j = 0; j < P - 1; ++j) {
    double u = 0.0;
    for (int n = 0; n < N; ++n)
      u += state_.modes[n] * basis_[static_cast<std::size_t>(n) * (P - 1) + j];
    grid_buf_[j] = -model_.dV(u);
  }
  for (int n = 0; n < N; ++n) {
    double f = 0.0;
    const double* row = &basis_[static_cast<std::size_t>(n) * (P - 1)];
    for (int j = 0; j < P - 1; ++j) f += grid_buf_[j] * row[j];
    force_buf_[n] = f / P;
  }

  // Bias force: A'(xi(u)) times the gradient of xi, which is the constant
  // function scaled by 1 / (2 pi (1 + (ubar/2)^2)).
  double ubar = spde_spatial_average(state_);
  double z[1] = {0.5 + std::atan(0.5 * ubar) / kPi};
  double dA[1];
  bias.bias_gradient(std::span<const double>(z, 1), dA);
  double chain = 1.0 / (2.0 * kPi * (1.0 + 0.25 * ubar * ubar));
  double bias_scale = dA[0] * chain;
  for (int n = 0; n < N; ++n) force_buf_[n] += bias_scale * mode_mass_[n];

  double noise = std::sqrt(2.0 * dt);
  for (int n = 0; n < N; ++n) {
    double u = state_.modes[n] + dt * force_buf_[n] + noise * rng.normal();
    state_.modes[n] = u / (1.0 + dt * lambda_[n]);
    if (!std::isfinite(state_.modes[n]))
      throw BlowupError("spde_step: non-finite mode", step, time);
  }
}

namespace {

RunReport run_spde_impl(const SpdeSettings& s, const GridFunction* a_fixed,
                        std::uint64_t stream) {
  if (!(s.dt > 0) || !(s.t_final > 0))
    throw ConfigError("sim.dt", "dt and t_final must be positive");
  long n_steps = std::llround(s.t_final / s.dt);
  if (n_steps < 1) n_steps = 1;
  if (n_steps > s.max_steps_cap)
    throw ConfigError("sim.t_final", "step count exceeds the configured cap");

  LoopSettings loop;
  loop.dt = s.dt;
  loop.n_steps = n_steps;
  for (double t : s.checkpoints) {
    long k = std::llround(t / s.dt);
    if (k >= 1 && k <= n_steps) loop.checkpoint_steps.push_back(k);
  }
  std::sort(loop.checkpoint_steps.begin(), loop.checkpoint_steps.end());
  loop.reference_bias = s.reference_bias;
  loop.histogram_bins = s.histogram_bins;

  SpdeSystem system(s.model, s.n_modes, s.grid_points);
  RngStream rng(s.seed, stream);

  std::vector<double> mu0_phi;
  mu0_phi.reserve(s.observables.size());
  for (const auto& o : s.observables) mu0_phi.push_back(system.observe(o));

  if (a_fixed) {
    BiasGrid grid = BiasGrid::frozen(*a_fixed, NormalizationSpec::l1());
    return run_trajectory(system, grid, false, loop, s.observables, mu0_phi, rng);
  }
  // The normalization is pinned to L1 for this system, so the weights are
  // exactly exp(-A_t(xi(u))).
  double z0 = xi_spde(system.state());
  BiasGrid grid(s.kernel, NormalizationSpec::l1(), InitialMeasure::single_atom({z0}),
                s.grid_size, s.refresh_stride);
  return run_trajectory(system, grid, true, loop, s.observables, mu0_phi, rng);
}

} // namespace

RunReport run_spde_abp(const SpdeSettings& s, std::uint64_t stream) {
  return run_spde_impl(s, nullptr, stream);
}

RunReport run_spde_fixed_bias(const SpdeSettings& s, const GridFunction& a_fixed,
                              std::uint64_t stream) {
  return run_spde_impl(s, &a_fixed, stream);
}

} // namespace abp
