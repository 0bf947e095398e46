#include "abp/bias.hpp"

#include <algorithm>
#include <cmath>

#include "abp/errors.hpp"
#include "abp/geometry.hpp"

namespace abp {

namespace {
constexpr double kSlack = 1e-12; // rounding allowance on the hard bounds
}

InitialMeasure InitialMeasure::uniform_measure() {
  InitialMeasure mu;
  mu.uniform = true;
  return mu;
}

InitialMeasure InitialMeasure::single_atom(std::vector<double> z) {
  InitialMeasure mu;
  mu.atoms.emplace_back(std::move(z), 1.0);
  return mu;
}

BiasGrid::BiasGrid(KernelSpec kernel, NormalizationSpec norm, const InitialMeasure& mu0,
                   int grid_size, int refresh_stride, bool track_mean_force)
    : kernel_(std::move(kernel)), norm_(std::move(norm)), G_(grid_size),
      m_(kernel_.m), refresh_stride_(std::max(1, refresh_stride)),
      track_mean_force_(track_mean_force) {
  if (G_ < 4) throw ConfigError("grid.size", "grid size must be >= 4");
  if (track_mean_force_ && m_ != 1)
    throw ConfigError("grid.track_mean_force", "mean-force accumulation is 1-d only");

  h_ = GridFunction(m_, G_, 0.0);
  if (track_mean_force_) dh_ = GridFunction(1, G_, 0.0);
  row_scratch_.resize(h_.node_count());
  if (track_mean_force_) drow_scratch_.resize(G_);

  if (mu0.uniform) {
    // The kernel normalization integrates out a uniform initial measure.
    std::fill(h_.v.begin(), h_.v.end(), 1.0);
  } else {
    if (mu0.atoms.empty()) throw DomainError("init_bias: empty initial measure");
    double total = 0.0;
    for (const auto& [z, w] : mu0.atoms) {
      if (!(w > 0.0)) throw DomainError("init_bias: atom weights must be positive");
      total += w;
    }
    for (const auto& [z, w] : mu0.atoms) {
      if (static_cast<int>(z.size()) != m_)
        throw DomainError("init_bias: atom dimension mismatch");
      kernel_row(kernel_, G_, z, row_scratch_);
      double scale = w / total;
      for (std::size_t i = 0; i < h_.v.size(); ++i) h_.v[i] += scale * row_scratch_[i];
      if (track_mean_force_) {
        kernel_row_deriv(kernel_, G_, z, drow_scratch_);
        for (int g = 0; g < G_; ++g) dh_.v[g] += scale * drow_scratch_[g];
      }
    }
  }

  KernelConstants kc = kernel_row_constants(kernel_, G_);
  row_lo_ = kc.min_value;
  row_hi_ = kc.max_value;
  if (!(row_lo_ > 0.0))
    throw ConfigError("kernel.epsilon",
                      "kernel too narrow for this grid: its columns underflow to zero "
                      "(raise epsilon or lower alpha)");
  recompute_scalars();
  h0_min_ = h_min_;
  h0_max_ = h_max_;
  bound_M1_ = kc.max_deriv / std::min(h0_min_, row_lo_);
  init_bounds();

  F_ = GridFunction(m_, G_, 0.0);
  A_ = GridFunction(m_, G_, 0.0);
  dA_.assign(m_, GridFunction(m_, G_, 0.0));
  check_bounds();
}

BiasGrid BiasGrid::frozen(const GridFunction& a_fixed, const NormalizationSpec& norm) {
  if (!a_fixed.all_finite()) throw DomainError("frozen bias: A must be finite");
  BiasGrid g;
  g.norm_ = norm;
  g.G_ = a_fixed.size;
  g.m_ = a_fixed.m;
  g.frozen_ = true;
  g.kernel_ = KernelSpec::constant(a_fixed.m);
  g.h_ = exp_of(a_fixed, -1.0);
  g.recompute_scalars();
  g.h0_min_ = g.h_min_;
  g.h0_max_ = g.h_max_;
  g.bound_m_ = g.h_min_ / g.n_h_;
  g.bound_M0_ = g.h_max_ / g.n_h_;
  g.F_ = GridFunction(g.m_, g.G_, 0.0);
  g.A_ = GridFunction(g.m_, g.G_, 0.0);
  g.dA_.assign(g.m_, GridFunction(g.m_, g.G_, 0.0));
  g.materialize();
  for (const auto& d : g.dA_)
    for (double x : d.v) g.bound_M1_ = std::max(g.bound_M1_, std::abs(x));
  return g;
}

void BiasGrid::recompute_scalars() {
  mean_h_ = h_.mean();
  h_min_ = h_.v[0];
  h_max_ = h_.v[0];
  for (double v : h_.v) {
    h_min_ = std::min(h_min_, v);
    h_max_ = std::max(h_max_, v);
  }
  n_h_ = (norm_.kind == NormalizationSpec::Kind::L1) ? mean_h_ : n_value(norm_, h_);
}

void BiasGrid::init_bounds() {
  double lo = std::min(h0_min_, row_lo_);
  double hi = std::max(h0_max_, row_hi_);
  bound_m_ = lo / hi;
  bound_M0_ = hi / lo;
}

void BiasGrid::deposit(std::span<const double> z, double w, double dt) {
  if (frozen_) throw DomainError("deposit: bias grid is frozen");
  if (!(w > 0.0) || !(dt > 0.0)) throw DomainError("deposit: w and dt must be positive");
  if (static_cast<int>(z.size()) != m_) throw DomainError("deposit: colvar dimension mismatch");
  if (w < bound_m_ * (1.0 - 1e-9) || w > bound_M0_ * (1.0 + 1e-9))
    throw InvariantError("deposit: weight outside the a-priori F bounds");

  kernel_row(kernel_, G_, z, row_scratch_);
  double incr = w * dt;
  double rlo = row_scratch_[0], rhi = row_scratch_[0];
  for (std::size_t i = 0; i < h_.v.size(); ++i) {
    double r = row_scratch_[i];
    rlo = std::min(rlo, r);
    rhi = std::max(rhi, r);
    h_.v[i] += incr * r;
  }
  // The sweep constants cover the row pattern up to its sampling density;
  // fold in the observed extremes so the sandwich stays exact.
  if (rlo < row_lo_ || rhi > row_hi_) {
    row_lo_ = std::min(row_lo_, rlo);
    row_hi_ = std::max(row_hi_, rhi);
    init_bounds();
  }
  if (track_mean_force_) {
    kernel_row_deriv(kernel_, G_, z, drow_scratch_);
    for (int g = 0; g < G_; ++g) dh_.v[g] += incr * drow_scratch_[g];
  }
  theta_ += incr;
  ++deposit_count_;
  cache_dirty_ = true;
  recompute_scalars();
  check_bounds();
}

void BiasGrid::check_bounds() const {
  double lo = std::min(h0_min_, row_lo_) * (1.0 + theta_);
  double hi = std::max(h0_max_, row_hi_) * (1.0 + theta_);
  if (h_min_ < lo * (1.0 - kSlack) || h_max_ > hi * (1.0 + kSlack))
    throw InvariantError("bias bounds violated: h outside the a-priori sandwich");
  double f_min = h_min_ / n_h_, f_max = h_max_ / n_h_;
  if (f_min < bound_m_ * (1.0 - kSlack) || f_max > bound_M0_ * (1.0 + kSlack))
    throw InvariantError("bias bounds violated: F outside [bound_m, bound_M0]");
  // |A| = |log(h/mean h)| <= log(max h / min h) <= log(hi/lo)
  double a_cap = std::log(bound_M0_ / bound_m_) * (1.0 + kSlack) + kSlack;
  if (std::log(h_max_ / h_min_) > a_cap)
    throw InvariantError("bias bounds violated: |A| exceeds the a-priori cap");
}

double BiasGrid::node_A(std::size_t idx) const { return -std::log(h_.v[idx] / mean_h_); }

double BiasGrid::node_dA(int axis, int i, int j) const {
  double inv2h = 0.5 * G_;
  if (m_ == 1) {
    int ip = (i + 1 == G_) ? 0 : i + 1;
    int im = (i == 0) ? G_ - 1 : i - 1;
    return (node_A(ip) - node_A(im)) * inv2h;
  }
  int ip = (i + 1 == G_) ? 0 : i + 1, im = (i == 0) ? G_ - 1 : i - 1;
  int jp = (j + 1 == G_) ? 0 : j + 1, jm = (j == 0) ? G_ - 1 : j - 1;
  if (axis == 0)
    return (node_A(h_.index(ip, j)) - node_A(h_.index(im, j))) * inv2h;
  return (node_A(h_.index(i, jp)) - node_A(h_.index(i, jm))) * inv2h;
}

namespace {
struct Cell1 {
  int i0, i1;
  double f;
};
inline Cell1 locate(double z, int G) {
  double s = wrap1(z) * G;
  int i0 = static_cast<int>(s);
  if (i0 >= G) i0 = G - 1;
  return {i0, (i0 + 1 == G) ? 0 : i0 + 1, s - i0};
}
} // namespace

double BiasGrid::weight(std::span<const double> z) const {
  if (m_ == 1) {
    Cell1 c = locate(z[0], G_);
    return node_F(c.i0) * (1 - c.f) + node_F(c.i1) * c.f;
  }
  Cell1 a = locate(z[0], G_), b = locate(z[1], G_);
  return node_F(h_.index(a.i0, b.i0)) * (1 - a.f) * (1 - b.f) +
         node_F(h_.index(a.i1, b.i0)) * a.f * (1 - b.f) +
         node_F(h_.index(a.i0, b.i1)) * (1 - a.f) * b.f +
         node_F(h_.index(a.i1, b.i1)) * a.f * b.f;
}

double BiasGrid::bias_value(std::span<const double> z) const {
  if (m_ == 1) {
    Cell1 c = locate(z[0], G_);
    return node_A(c.i0) * (1 - c.f) + node_A(c.i1) * c.f;
  }
  Cell1 a = locate(z[0], G_), b = locate(z[1], G_);
  return node_A(h_.index(a.i0, b.i0)) * (1 - a.f) * (1 - b.f) +
         node_A(h_.index(a.i1, b.i0)) * a.f * (1 - b.f) +
         node_A(h_.index(a.i0, b.i1)) * (1 - a.f) * b.f +
         node_A(h_.index(a.i1, b.i1)) * a.f * b.f;
}

void BiasGrid::bias_gradient(std::span<const double> z, std::span<double> out) const {
  if (static_cast<int>(out.size()) != m_) throw DomainError("bias_gradient: bad output size");
  if (m_ == 1) {
    Cell1 c = locate(z[0], G_);
    out[0] = node_dA(0, c.i0, 0) * (1 - c.f) + node_dA(0, c.i1, 0) * c.f;
    return;
  }
  Cell1 a = locate(z[0], G_), b = locate(z[1], G_);
  for (int axis = 0; axis < 2; ++axis)
    out[axis] = node_dA(axis, a.i0, b.i0) * (1 - a.f) * (1 - b.f) +
                node_dA(axis, a.i1, b.i0) * a.f * (1 - b.f) +
                node_dA(axis, a.i0, b.i1) * (1 - a.f) * b.f +
                node_dA(axis, a.i1, b.i1) * a.f * b.f;
}

double BiasGrid::mean_force_at(std::span<const double> z) const {
  if (!track_mean_force_)
    throw DomainError("mean_force: estimator disabled (grid.track_mean_force)");
  return -dh_.interp(z) / h_.interp(z);
}

void BiasGrid::materialize() const {
  if (!cache_dirty_) return;
  for (std::size_t i = 0; i < h_.v.size(); ++i) {
    F_.v[i] = node_F(i);
    A_.v[i] = node_A(i);
  }
  if (m_ == 1) {
    for (int i = 0; i < G_; ++i) dA_[0].v[i] = node_dA(0, i, 0);
  } else {
    for (int i = 0; i < G_; ++i)
      for (int j = 0; j < G_; ++j) {
        dA_[0].v[A_.index(i, j)] = node_dA(0, i, j);
        dA_[1].v[A_.index(i, j)] = node_dA(1, i, j);
      }
  }
  cache_dirty_ = false;
}

const GridFunction& BiasGrid::F() const {
  materialize();
  return F_;
}

const GridFunction& BiasGrid::A() const {
  materialize();
  return A_;
}

const GridFunction& BiasGrid::dA(int axis) const {
  materialize();
  return dA_[axis];
}

const GridFunction& BiasGrid::dh() const {
  if (!track_mean_force_)
    throw DomainError("mean_force: estimator disabled (grid.track_mean_force)");
  return dh_;
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  if (a.v.size() != b.v.size()) throw DomainError("sup_distance: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s = std::max(s, std::abs(a.v[i] - b.v[i]));
  return s;
}

} // namespace abp
