#ifndef ABP_SPDE_HPP
#define ABP_SPDE_HPP

#include <cstdint>
#include <vector>

#include "abp/engine.hpp"

namespace abp {

/// Pointwise nonlinearity of the semilinear SPDE on (0,1) with Dirichlet
/// boundary conditions. The cosine preset c*cos(x) satisfies the dissipativity
/// condition sup|second derivative| = c < pi^2; Allen-Cahn (x^4/4 - x^2/2)
/// violates it and runs only behind an explicit override.
struct SpdeModel {
  enum class Nonlinearity { Cosine, AllenCahn };
  Nonlinearity kind = Nonlinearity::Cosine;
  double c = 1.0;

  double dV(double x) const; // pointwise derivative of the nonlinearity

  static SpdeModel cosine(double c);
  static SpdeModel allen_cahn(bool allow_override);
};

/// Truncated sine-basis state: coefficients u_1..u_N on e_n(x) =
/// sqrt(2) sin(n pi x), with a P-point interior grid for the pseudo-spectral
/// nonlinearity (P >= 4N keeps aliasing out of the retained modes; the
/// discrete sine transform on x_j = j/P is exactly orthogonal).
struct SpectralState {
  int n_modes = 32;
  int grid_points = 128;
  std::vector<double> modes;

  SpectralState(int n_modes, int grid_points);
};

/// Colvar of a spectral state: 1/2 + arctan(ubar/2)/pi with ubar the spatial
/// average of u.
double xi_spde(const SpectralState& state);
double spde_spatial_average(const SpectralState& state);

/// Reference discrete sine transforms on the interior grid x_j = j/P,
/// j = 1..P-1 (exactly orthogonal: analyze(synthesize(u)) == u for
/// n_modes < P).
std::vector<double> sine_synthesize(std::span<const double> modes, int grid_points);
std::vector<double> sine_analyze(std::span<const double> grid_values, int n_modes);

/// Semi-implicit Euler step of the biased SPDE: pseudo-spectral nonlinearity,
/// bias force A'(xi(u)) projected through the gradient of xi, explicit noise,
/// implicit stiff linear part: u_n <- (u_n + dt f_n + sqrt(2 dt) xi_n) /
/// (1 + dt n^2 pi^2).
class SpdeSystem : public TrajectorySystem {
public:
  SpdeSystem(SpdeModel model, int n_modes, int grid_points);

  int colvar_dim() const override { return 1; }
  void colvar(std::span<double> z) const override;
  double observe(const Observable& obs) const override;
  void advance(const BiasGrid& bias, double dt, RngStream& rng, long step,
               double time) override;
  double norm2() const override;

  const SpectralState& state() const { return state_; }
  SpectralState& state() { return state_; }

  /// One step without an engine around it (unit tests).
  void step(const BiasGrid& bias, double dt, RngStream& rng);

private:
  SpdeModel model_;
  SpectralState state_;
  std::vector<double> basis_;      // sqrt(2) sin(n pi j / P), n-major
  std::vector<double> mode_mass_;  // <e_n, 1>
  std::vector<double> lambda_;     // n^2 pi^2
  std::vector<double> grid_buf_, force_buf_;
};

struct SpdeSettings {
  SpdeModel model;
  int n_modes = 32;
  int grid_points = 128;
  KernelSpec kernel;
  int grid_size = 256;
  int refresh_stride = 1;
  double dt = 1e-3;
  double t_final = 100.0;
  std::uint64_t seed = 0;
  std::vector<double> checkpoints;
  std::vector<Observable> observables;
  const GridFunction* reference_bias = nullptr;
  int histogram_bins = 50;
  long max_steps_cap = 100000000;
};

/// Adaptive run with the SPDE stepper; weights exp(-A_t(xi(u))) through the
/// L1 normalization (fixed for this system).
RunReport run_spde_abp(const SpdeSettings& s, std::uint64_t stream = 0);

/// Non-adaptive SPDE run with a fixed bias profile.
RunReport run_spde_fixed_bias(const SpdeSettings& s, const GridFunction& a_fixed,
                              std::uint64_t stream = 0);

} // namespace abp

#endif
