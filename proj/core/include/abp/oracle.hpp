#ifndef ABP_ORACLE_HPP
#define ABP_ORACLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "abp/engine.hpp"
#include "abp/grid_function.hpp"
#include "abp/kernel.hpp"
#include "abp/model.hpp"

namespace abp {

/// Deterministic quadrature references for torus presets with d <= 2 and a
/// one-dimensional colvar. All torus integrals use the periodic rectangle
/// rule, which is spectrally accurate on the smooth built-in presets;
/// cumulative integrals and resampling are spectral (FFT-based), so every
/// value here is resolution-robust to ~1e-12.

/// mu_star(phi): average of phi against exp(-V)/Z.
double equilibrium_average(const Potential& V, const Observable& phi, int resolution);

/// Free-energy profile A on the colvar torus (m=1): exp(-A(z)) is the
/// marginal of exp(-V)/Z under the coordinate projection, recentred so the
/// rectangle-rule integral of exp(-A) over the output grid is exactly 1.
GridFunction free_energy_profile(const Potential& V, int out_size, int resolution);

/// Kernel-smoothed free-energy limit: -log of (K applied to exp(-A_profile)).
GridFunction smoothed_free_energy(const Potential& V, const KernelSpec& kernel,
                                  int out_size, int resolution);

/// Same limit for the extended dynamics: the kernel composes with the
/// coupling kernel exp(-|z - zeta|^2 / (2 eps)) (a wrapped Gaussian of width
/// sqrt(eps)).
GridFunction smoothed_free_energy_extended(const Potential& V, const KernelSpec& kernel,
                                           double eps_ext, int out_size, int resolution);

/// mu_star^A(phi): average of phi against exp(-(V - A o xi))/Z_A, with the
/// grid bias A resampled spectrally onto the quadrature grid. Returns the
/// average and Z_A.
struct BiasedAverage {
  double value = 0.0;
  double z_a = 0.0;
};
BiasedAverage biased_average(const Potential& V, const GridFunction& A,
                             const Observable& phi, int resolution);

/// Solution of the 1-d Poisson equation L^A Psi = exp(-A)(phi - mu_star(phi))
/// on the torus (xi = identity), via the integrating-factor form
/// (exp(-V_A) Psi')' = exp(-V_A) rhs. The additive constant is fixed by
/// centering Psi against mu_star^A. `defect` is the sup-norm residual of an
/// independent 4th-order finite-difference application of L^A.
struct PoissonSolution {
  GridFunction psi;
  GridFunction psi_prime;
  double mu_star_phi = 0.0;
  double v_inf = 0.0;   // 2 mu_star(|Psi'|^2)
  double defect = 0.0;
};
PoissonSolution solve_poisson_1d(const Potential& V, const GridFunction* A,
                                 const Observable& phi, int resolution);

/// V_inf(phi, A) = 2 mu_star(|Psi'(A,.)|^2).
double asymptotic_variance(const Potential& V, const GridFunction* A,
                           const Observable& phi, int resolution);

/// All tables for one preset, as dumped by the CLI `oracle` subcommand.
struct OracleTables {
  std::vector<std::string> observable_names;
  std::vector<double> mu_star;
  GridFunction a_star;
  GridFunction a_inf;
  std::vector<double> mu_star_biased; // against exp(-(V - A_inf o xi))
  double z_a_inf = 0.0;
  // d = 1 only:
  std::optional<GridFunction> psi;               // first observable, A = A_inf
  std::vector<double> v_inf_unbiased, v_inf_ainf;
};

OracleTables build_oracle_tables(const Potential& V, const KernelSpec& kernel,
                                 const std::vector<Observable>& observables,
                                 int out_size, int resolution);

/// Spectral helpers shared with tests (zero-mean periodic antiderivative,
/// derivative, trigonometric resampling).
std::vector<double> periodic_antiderivative(const std::vector<double>& f);
std::vector<double> periodic_derivative(const std::vector<double>& f);
std::vector<double> trig_resample(const std::vector<double>& f, int out_size);

} // namespace abp

#endif
