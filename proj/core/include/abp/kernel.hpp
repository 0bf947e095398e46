#ifndef ABP_KERNEL_HPP
#define ABP_KERNEL_HPP

#include <span>
#include <vector>

namespace abp {

/// Regularization kernel K on T^m x T^m: strictly positive, smooth, and
/// normalized so that the z-integral of K(z, zeta) is 1 for every zeta.
///
/// Families:
///  - WrappedGaussian:  K(z,zeta) = alpha * w_eps(z - zeta) + (1 - alpha),
///    with w_eps the wrapped Gaussian of width eps, summed over `wraps`
///    periods and renormalized so its exact torus integral is 1. The floor
///    (1 - alpha) keeps K bounded away from zero for alpha < 1; the wrapped
///    Gaussian itself is strictly positive so alpha = 1 is also admissible.
///  - Constant: K == 1. The adaptive system degenerates to the fixed-bias
///    dynamics with this choice; kept as an exact family so the degeneracy is
///    a bitwise-testable identity.
///  - Mixture (m=1): sum_n K_n(z,zeta) * theta_n(zeta) with raised-cosine
///    partition-of-unity weights theta_n centered at n/N.
struct KernelSpec {
  enum class Family { WrappedGaussian, Constant, Mixture };

  Family family = Family::WrappedGaussian;
  int m = 1;           // colvar dimension, 1 or 2
  double epsilon = 0.05;
  double alpha = 0.9;
  int wraps = 5;
  std::vector<KernelSpec> components; // Mixture only

  static KernelSpec wrapped_gaussian(int m, double epsilon, double alpha, int wraps = 5);
  static KernelSpec constant(int m = 1);
  static KernelSpec mixture(std::vector<KernelSpec> components);

  /// Torus-integral normalization of the truncated wrap sum (cached).
  double bump_norm = 1.0;
};

/// Grid min/max constants of a kernel: m(K), M^(0)(K) over values and
/// M^(1)(K) over |d/dz K| (Euclidean norm of the z-gradient for m=2).
struct KernelConstants {
  double min_value = 0.0;
  double max_value = 0.0;
  double max_deriv = 0.0;
};

/// K(z, zeta) with the full documented wrap sum.
double kernel_eval(const KernelSpec& spec, std::span<const double> z,
                   std::span<const double> zeta);

/// d/dz_i K(z, zeta).
double kernel_eval_deriv(const KernelSpec& spec, std::span<const double> z,
                         std::span<const double> zeta, int axis);

/// Scan K and |dK/dz| on a grid_size^m displacement grid.
KernelConstants kernel_min_max(const KernelSpec& spec, int grid_size);

/// Per-deposit column: K(z_g, zeta) over the uniform G^m grid, discretely
/// renormalized so the rectangle-rule mean of the bump part is exactly 1
/// (hence the mean of the row is exactly alpha + (1-alpha) = 1).
/// `out` must have G (m=1) or G*G (m=2) entries.
void kernel_row(const KernelSpec& spec, int G, std::span<const double> zeta,
                std::span<double> out);

/// Same sweep for the z-derivative of the row (m=1 only); shares the discrete
/// normalization factor of the value row.
void kernel_row_deriv(const KernelSpec& spec, int G, std::span<const double> zeta,
                      std::span<double> out);

/// Constants of the *discrete* rows: extrema of kernel_row entries over a
/// dense sweep of zeta offsets within one grid period (the row pattern is
/// exactly periodic in zeta with period 1/G).
KernelConstants kernel_row_constants(const KernelSpec& spec, int G);

} // namespace abp

#endif
