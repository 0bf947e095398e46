#ifndef ABP_BIAS_HPP
#define ABP_BIAS_HPP

#include <utility>
#include <vector>

#include "abp/grid_function.hpp"
#include "abp/kernel.hpp"
#include "abp/model.hpp"
#include "abp/normalization.hpp"

namespace abp {

/// Initial measure for the accumulation: either the uniform measure on the
/// colvar torus or a finite list of weighted atoms (given by their colvar
/// positions). Weights are normalized to total mass 1.
struct InitialMeasure {
  bool uniform = false;
  std::vector<std::pair<std::vector<double>, double>> atoms;

  static InitialMeasure uniform_measure();
  static InitialMeasure single_atom(std::vector<double> z);
};

/// Discretized kernel accumulation h, its normalization F = h / n(h), the
/// bias A = -log(h / mean h) and centered-difference gradient, on a uniform
/// G^m grid of the colvar torus (m in {1,2}).
///
/// Point reads (weight, bias_value, bias_gradient) are evaluated directly
/// from h and the running scalars n(h), mean(h), so they reflect every
/// deposit with no lag; the full F/A/dA arrays are materialized on demand.
///
/// Hard a-priori bounds: every deposited kernel column has entries inside
/// [row_lo, row_hi], so
///     min h >= lo * (1 + theta),   max h <= hi * (1 + theta),
/// with lo = min(min h0, row_lo), hi = max(max h0, row_hi). Together with the
/// sandwich property of the normalization this pins F into
/// [bound_m, bound_M0] = [lo/hi, hi/lo] at every node of every step. The
/// bounds are checked after every deposit (with a 1e-12 relative allowance
/// for accumulated rounding) and a violation throws InvariantError.
class BiasGrid : public BiasFunction {
public:
  BiasGrid(KernelSpec kernel, NormalizationSpec norm, const InitialMeasure& mu0,
           int grid_size, int refresh_stride = 1, bool track_mean_force = false);

  /// Non-adaptive grid holding a fixed bias: F is frozen at N(exp(-A_fixed))
  /// and deposits are rejected.
  static BiasGrid frozen(const GridFunction& a_fixed, const NormalizationSpec& norm);

  /// Accumulate one weighted hit: h += w*dt*K(.,z), theta += w*dt, then
  /// re-check the bounds.
  void deposit(std::span<const double> z, double w, double dt);

  /// Interpolated bias A(z) (periodic multilinear over the node values).
  double bias_value(std::span<const double> z) const;
  /// Interpolated centered-difference gradient of A.
  void bias_gradient(std::span<const double> z, std::span<double> out) const;
  /// Interpolated weight F(z).
  double weight(std::span<const double> z) const;

  // BiasFunction interface (the dynamics sees A and grad A).
  double value(std::span<const double> z) const override { return bias_value(z); }
  void gradient(std::span<const double> z, std::span<double> out) const override {
    bias_gradient(z, out);
  }

  /// -(d/dz h)(z) / h(z); needs track_mean_force (m=1).
  double mean_force_at(std::span<const double> z) const;
  bool tracks_mean_force() const { return track_mean_force_; }

  int grid_size() const { return G_; }
  int colvar_dim() const { return m_; }
  bool is_frozen() const { return frozen_; }
  double theta() const { return theta_; }

  const GridFunction& h() const { return h_; }
  const GridFunction& F() const;
  const GridFunction& A() const;
  const GridFunction& dA(int axis = 0) const;
  const GridFunction& dh() const;

  double bound_m() const { return bound_m_; }
  double bound_M0() const { return bound_M0_; }
  double bound_M1() const { return bound_M1_; }

  const KernelSpec& kernel() const { return kernel_; }
  const NormalizationSpec& norm() const { return norm_; }

  /// Recompute the materialized F/A/dA snapshot if deposits arrived since the
  /// last one.
  void refresh() const { materialize(); }

  long deposits() const { return deposit_count_; }

private:
  BiasGrid() = default;
  void recompute_scalars();
  void init_bounds();
  void check_bounds() const;
  void materialize() const;

  double node_F(std::size_t idx) const { return h_.v[idx] / n_h_; }
  double node_A(std::size_t idx) const;
  double node_dA(int axis, int i, int j) const;

  KernelSpec kernel_;
  NormalizationSpec norm_;
  int G_ = 0;
  int m_ = 1;
  int refresh_stride_ = 1; // accepted knob; reads are always current here
  bool track_mean_force_ = false;
  bool frozen_ = false;

  GridFunction h_;
  GridFunction dh_;
  double theta_ = 0.0;
  long deposit_count_ = 0;

  // running scalars (updated on every deposit)
  double n_h_ = 1.0, mean_h_ = 1.0, h_min_ = 1.0, h_max_ = 1.0;

  // a-priori bound bookkeeping
  double row_lo_ = 1.0, row_hi_ = 1.0;
  double h0_min_ = 1.0, h0_max_ = 1.0;
  double bound_m_ = 1.0, bound_M0_ = 1.0, bound_M1_ = 0.0;

  // materialized-on-demand snapshot
  mutable GridFunction F_, A_;
  mutable std::vector<GridFunction> dA_;
  mutable bool cache_dirty_ = true;

  std::vector<double> row_scratch_, drow_scratch_;
};

/// Supremum-norm distance between two grid functions of identical shape.
double sup_distance(const GridFunction& a, const GridFunction& b);

} // namespace abp

#endif
