#include "abp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "abp/errors.hpp"
#include "abp/geometry.hpp"

namespace abp {

namespace {

constexpr double kRoot2Pi = 2.5066282746310002;
// Gaussian terms with squared argument beyond this contribute < 4e-31 and are
// skipped in the hot row sweep.
constexpr double kExpCut = 70.0;

double gauss(double t, double eps) {
  return std::exp(-0.5 * (t / eps) * (t / eps)) / (eps * kRoot2Pi);
}

double dgauss(double t, double eps) { return -(t / (eps * eps)) * gauss(t, eps); }

// Full truncated wrap sum, normalized so the exact torus integral is 1.
double wrapped_bump(double u, double eps, int wraps, double norm) {
  double s = 0.0;
  for (int j = -wraps; j <= wraps; ++j) s += gauss(u + j, eps);
  return s / norm;
}

double wrapped_bump_deriv(double u, double eps, int wraps, double norm) {
  double s = 0.0;
  for (int j = -wraps; j <= wraps; ++j) s += dgauss(u + j, eps);
  return s / norm;
}

// Pruned wrap sum for single evaluations; u must already lie in [-0.5, 0.5).
double wrapped_bump_fast(double u, double eps, int wraps, double norm) {
  double s = 0.0;
  for (int j = -wraps; j <= wraps; ++j) {
    double t = (u + j) / eps;
    double q = 0.5 * t * t;
    if (q <= kExpCut) s += std::exp(-q) / (eps * kRoot2Pi);
  }
  return s / norm;
}

double wrapped_bump_deriv_fast(double u, double eps, int wraps, double norm) {
  double s = 0.0;
  for (int j = -wraps; j <= wraps; ++j) {
    double t = (u + j) / eps;
    double q = 0.5 * t * t;
    if (q <= kExpCut) s += -(t / eps) * std::exp(-q) / (eps * kRoot2Pi);
  }
  return s / norm;
}

// Accumulate scale * exp(-(a + g h)^2 / (2 eps^2)) into out[g] over the node
// progression, and optionally the t-derivative into dout[g]. Gaussians on an
// arithmetic progression obey a two-multiply recurrence; sweeping outward
// from the node nearest the peak keeps both directions descending, so
// underflow saturates at zero harmlessly. Costs three exp calls per image.
void add_gaussian_image(double a, double h, double eps, int G, double scale,
                        double* out, double* dout) {
  double r = eps * std::sqrt(2.0 * kExpCut);
  int glo = static_cast<int>(std::ceil((-r - a) / h));
  int ghi = static_cast<int>(std::floor((r - a) / h));
  glo = std::max(glo, 0);
  ghi = std::min(ghi, G - 1);
  if (glo > ghi) return;

  double inv2 = 0.5 / (eps * eps);
  int gpk = static_cast<int>(std::llround(-a / h));
  gpk = std::min(std::max(gpk, glo), ghi);
  double shrink = std::exp(-2.0 * h * h * inv2);
  double dscale = 1.0 / (eps * eps);

  // The two-multiply recurrence compounds rounding roughly like n^1.5 ulp, so
  // reseed it from exp every block to keep rows accurate to ~1e-13 (the bias
  // gradient differences adjacent log h values, which amplifies row noise by
  // half the grid size).
  constexpr int kReseed = 64;

  double e = 0.0, up = 0.0;
  for (int g = gpk; g <= ghi; ++g) {
    if ((g - gpk) % kReseed == 0) {
      double t = a + g * h;
      e = scale * std::exp(-t * t * inv2);
      up = std::exp(-(2.0 * t * h + h * h) * inv2);
    }
    out[g] += e;
    if (dout) dout[g] += -(a + g * h) * dscale * e;
    e *= up;
    up *= shrink;
  }
  double down = 0.0;
  for (int g = gpk - 1; g >= glo; --g) {
    if ((gpk - 1 - g) % kReseed == 0) {
      double t = a + g * h;
      e = scale * std::exp(-t * t * inv2);
      down = std::exp((2.0 * t * h - h * h) * inv2); // factor toward g-1
    }
    out[g] += e;
    if (dout) dout[g] += -(a + g * h) * dscale * e;
    e *= down;
    down *= shrink;
  }
}

// Full bump row via the recurrence: values of the truncated wrapped Gaussian
// at every node z_g = g/G, for the center zeta.
void bump_row_sweep(double eps, int wraps, double norm, int G, double zeta,
                    double* out, double* dout) {
  std::fill(out, out + G, 0.0);
  if (dout) std::fill(dout, dout + G, 0.0);
  double h = 1.0 / G;
  double base = -zeta; // argument of node 0 before periodization
  double scale = 1.0 / (eps * kRoot2Pi * norm);
  for (int j = -wraps; j <= wraps; ++j)
    add_gaussian_image(base + j, h, eps, G, scale, out, dout);
}

// Raised-cosine partition of unity on T^1: nonnegative, smooth, sums to 1.
double mixture_weight(int n, int count, double zeta) {
  if (count == 1) return 1.0;
  double c = static_cast<double>(n) / count;
  return (1.0 + std::cos(2.0 * std::numbers::pi * (zeta - c))) / count;
}

void validate(const KernelSpec& spec) {
  if (spec.m != 1 && spec.m != 2) throw ConfigError("kernel.m", "m must be 1 or 2");
  if (spec.family == KernelSpec::Family::WrappedGaussian) {
    if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0))
      throw ConfigError("kernel.epsilon", "epsilon must lie in (0,1)");
    if (!(spec.alpha > 0.0 && spec.alpha <= 1.0))
      throw ConfigError("kernel.alpha", "alpha must lie in (0,1]");
    if (spec.wraps < 3) throw ConfigError("kernel.wraps", "wraps must be >= 3");
  }
  if (spec.family == KernelSpec::Family::Mixture) {
    if (spec.m != 1) throw ConfigError("kernel.m", "mixtures are 1-d only");
    if (spec.components.empty())
      throw ConfigError("kernel", "mixture needs at least one component");
    for (const auto& c : spec.components)
      if (c.family == KernelSpec::Family::Mixture)
        throw ConfigError("kernel", "nested mixtures are not supported");
  }
}

} // namespace

KernelSpec KernelSpec::wrapped_gaussian(int m, double epsilon, double alpha, int wraps) {
  KernelSpec s;
  s.family = Family::WrappedGaussian;
  s.m = m;
  s.epsilon = epsilon;
  s.alpha = alpha;
  s.wraps = wraps;
  validate(s);
  s.bump_norm = std::erf((wraps + 0.5) / (epsilon * std::numbers::sqrt2));
  return s;
}

KernelSpec KernelSpec::constant(int m) {
  KernelSpec s;
  s.family = Family::Constant;
  s.m = m;
  validate(s);
  return s;
}

KernelSpec KernelSpec::mixture(std::vector<KernelSpec> components) {
  KernelSpec s;
  s.family = Family::Mixture;
  s.m = 1;
  s.components = std::move(components);
  validate(s);
  return s;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> z,
                   std::span<const double> zeta) {
  if (static_cast<int>(z.size()) != spec.m || static_cast<int>(zeta.size()) != spec.m)
    throw DomainError("kernel_eval: dimension mismatch");
  switch (spec.family) {
    case KernelSpec::Family::Constant:
      return 1.0;
    case KernelSpec::Family::WrappedGaussian: {
      double bump = 1.0;
      for (int i = 0; i < spec.m; ++i) {
        double u = periodic_displacement1(z[i], zeta[i]);
        bump *= wrapped_bump(u, spec.epsilon, spec.wraps, spec.bump_norm);
      }
      return spec.alpha * bump + (1.0 - spec.alpha);
    }
    case KernelSpec::Family::Mixture: {
      double s = 0.0;
      int count = static_cast<int>(spec.components.size());
      for (int n = 0; n < count; ++n)
        s += mixture_weight(n, count, zeta[0]) * kernel_eval(spec.components[n], z, zeta);
      return s;
    }
  }
  throw DomainError("kernel_eval: unknown family");
}

double kernel_eval_deriv(const KernelSpec& spec, std::span<const double> z,
                         std::span<const double> zeta, int axis) {
  if (axis < 0 || axis >= spec.m) throw DomainError("kernel_eval_deriv: bad axis");
  switch (spec.family) {
    case KernelSpec::Family::Constant:
      return 0.0;
    case KernelSpec::Family::WrappedGaussian: {
      double value = spec.alpha;
      for (int i = 0; i < spec.m; ++i) {
        double u = periodic_displacement1(z[i], zeta[i]);
        value *= (i == axis) ? wrapped_bump_deriv(u, spec.epsilon, spec.wraps, spec.bump_norm)
                             : wrapped_bump(u, spec.epsilon, spec.wraps, spec.bump_norm);
      }
      return value;
    }
    case KernelSpec::Family::Mixture: {
      double s = 0.0;
      int count = static_cast<int>(spec.components.size());
      for (int n = 0; n < count; ++n)
        s += mixture_weight(n, count, zeta[0]) *
             kernel_eval_deriv(spec.components[n], z, zeta, axis);
      return s;
    }
  }
  throw DomainError("kernel_eval_deriv: unknown family");
}

KernelConstants kernel_min_max(const KernelSpec& spec, int grid_size) {
  if (grid_size < 16) throw DomainError("kernel_min_max: grid_size must be >= 16");
  KernelConstants k;
  k.min_value = 1e300;
  k.max_value = -1e300;
  k.max_deriv = 0.0;
  std::vector<double> z(spec.m, 0.0), zeta(spec.m, 0.0);
  if (spec.m == 1) {
    // Mixtures are inhomogeneous in zeta; difference kernels only need the
    // displacement scanned.
    int zeta_steps = (spec.family == KernelSpec::Family::Mixture) ? grid_size : 1;
    for (int jz = 0; jz < zeta_steps; ++jz) {
      zeta[0] = static_cast<double>(jz) / zeta_steps;
      for (int i = 0; i < grid_size; ++i) {
        z[0] = wrap1(zeta[0] + static_cast<double>(i) / grid_size);
        double val = kernel_eval(spec, z, zeta);
        double der = std::abs(kernel_eval_deriv(spec, z, zeta, 0));
        k.min_value = std::min(k.min_value, val);
        k.max_value = std::max(k.max_value, val);
        k.max_deriv = std::max(k.max_deriv, der);
      }
    }
  } else {
    for (int i = 0; i < grid_size; ++i) {
      z[0] = static_cast<double>(i) / grid_size;
      for (int j = 0; j < grid_size; ++j) {
        z[1] = static_cast<double>(j) / grid_size;
        double val = kernel_eval(spec, z, zeta);
        double d0 = kernel_eval_deriv(spec, z, zeta, 0);
        double d1 = kernel_eval_deriv(spec, z, zeta, 1);
        k.min_value = std::min(k.min_value, val);
        k.max_value = std::max(k.max_value, val);
        k.max_deriv = std::max(k.max_deriv, std::hypot(d0, d1));
      }
    }
  }
  return k;
}

namespace {

// One-dimensional bump sweep over the grid, discretely renormalized to mean
// exactly 1. Returns the normalization factor applied.
double bump_row_1d(double eps, int wraps, double norm, int G, double zeta,
                   std::span<double> out) {
  bump_row_sweep(eps, wraps, norm, G, zeta, out.data(), nullptr);
  double s = pairwise_mean(std::span<const double>(out.data(), G));
  for (int g = 0; g < G; ++g) out[g] /= s;
  return s;
}

void row_impl(const KernelSpec& spec, int G, std::span<const double> zeta,
              std::span<double> out, std::vector<double>& scratch) {
  switch (spec.family) {
    case KernelSpec::Family::Constant:
      std::fill(out.begin(), out.end(), 1.0);
      return;
    case KernelSpec::Family::WrappedGaussian: {
      if (spec.m == 1) {
        bump_row_1d(spec.epsilon, spec.wraps, spec.bump_norm, G, zeta[0], out);
        double a = spec.alpha;
        for (int g = 0; g < G; ++g) out[g] = a * out[g] + (1.0 - a);
      } else {
        scratch.resize(2 * static_cast<std::size_t>(G));
        std::span<double> r0(scratch.data(), G), r1(scratch.data() + G, G);
        bump_row_1d(spec.epsilon, spec.wraps, spec.bump_norm, G, zeta[0], r0);
        bump_row_1d(spec.epsilon, spec.wraps, spec.bump_norm, G, zeta[1], r1);
        double a = spec.alpha;
        for (int i = 0; i < G; ++i)
          for (int j = 0; j < G; ++j)
            out[static_cast<std::size_t>(i) * G + j] = a * r0[i] * r1[j] + (1.0 - a);
      }
      return;
    }
    case KernelSpec::Family::Mixture: {
      std::fill(out.begin(), out.end(), 0.0);
      std::vector<double> comp(out.size());
      std::vector<double> inner;
      int count = static_cast<int>(spec.components.size());
      for (int n = 0; n < count; ++n) {
        double w = mixture_weight(n, count, zeta[0]);
        row_impl(spec.components[n], G, zeta, comp, inner);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * comp[i];
      }
      return;
    }
  }
}

} // namespace

void kernel_row(const KernelSpec& spec, int G, std::span<const double> zeta,
                std::span<double> out) {
  std::size_t expected = (spec.m == 1) ? static_cast<std::size_t>(G)
                                       : static_cast<std::size_t>(G) * G;
  if (out.size() != expected || static_cast<int>(zeta.size()) != spec.m)
    throw DomainError("kernel_row: size mismatch");
  std::vector<double> scratch;
  row_impl(spec, G, zeta, out, scratch);
}

void kernel_row_deriv(const KernelSpec& spec, int G, std::span<const double> zeta,
                      std::span<double> out) {
  if (spec.m != 1) throw DomainError("kernel_row_deriv: m=1 only");
  if (out.size() != static_cast<std::size_t>(G) || zeta.size() != 1)
    throw DomainError("kernel_row_deriv: size mismatch");
  switch (spec.family) {
    case KernelSpec::Family::Constant:
      std::fill(out.begin(), out.end(), 0.0);
      return;
    case KernelSpec::Family::WrappedGaussian: {
      // Shares the discrete normalization factor of the value row.
      std::vector<double> vals(G);
      bump_row_sweep(spec.epsilon, spec.wraps, spec.bump_norm, G, zeta[0], vals.data(),
                     out.data());
      double s = pairwise_mean(vals);
      for (int g = 0; g < G; ++g) out[g] = spec.alpha * out[g] / s;
      return;
    }
    case KernelSpec::Family::Mixture: {
      std::fill(out.begin(), out.end(), 0.0);
      std::vector<double> comp(G);
      int count = static_cast<int>(spec.components.size());
      for (int n = 0; n < count; ++n) {
        double w = mixture_weight(n, count, zeta[0]);
        kernel_row_deriv(spec.components[n], G, zeta, comp);
        for (int g = 0; g < G; ++g) out[g] += w * comp[g];
      }
      return;
    }
  }
}

KernelConstants kernel_row_constants(const KernelSpec& spec, int G) {
  KernelConstants k;
  if (spec.family == KernelSpec::Family::Constant) {
    k.min_value = k.max_value = 1.0;
    k.max_deriv = 0.0;
    return k;
  }
  k.min_value = 1e300;
  k.max_value = -1e300;
  k.max_deriv = 0.0;

  if (spec.family == KernelSpec::Family::WrappedGaussian) {
    // The discrete row pattern is exactly periodic in zeta with period 1/G,
    // so sweeping offsets inside one period reaches every displacement.
    const int offsets = 64;
    double b_lo = 1e300, b_hi = -1e300, db_hi = 0.0;
    std::vector<double> bump(G), dbump(G);
    for (int a = 0; a < offsets; ++a) {
      double zeta = a / (static_cast<double>(offsets) * G);
      bump_row_sweep(spec.epsilon, spec.wraps, spec.bump_norm, G, zeta, bump.data(),
                     dbump.data());
      double s = pairwise_mean(bump);
      for (int g = 0; g < G; ++g) {
        b_lo = std::min(b_lo, bump[g] / s);
        b_hi = std::max(b_hi, bump[g] / s);
        db_hi = std::max(db_hi, std::abs(dbump[g] / s));
      }
    }
    double a = spec.alpha;
    if (spec.m == 1) {
      k.min_value = a * b_lo + (1.0 - a);
      k.max_value = a * b_hi + (1.0 - a);
      k.max_deriv = a * db_hi;
    } else {
      // Rows are separable products of per-axis bump rows.
      k.min_value = a * b_lo * b_lo + (1.0 - a);
      k.max_value = a * b_hi * b_hi + (1.0 - a);
      k.max_deriv = a * db_hi * b_hi;
    }
    return k;
  }

  // Mixtures vary on the full circle.
  std::vector<double> row(G), drow(G), scratch;
  std::vector<double> zeta(1, 0.0);
  int samples = 64 * G;
  for (int a = 0; a < samples; ++a) {
    zeta[0] = static_cast<double>(a) / samples;
    row_impl(spec, G, zeta, row, scratch);
    kernel_row_deriv(spec, G, zeta, drow);
    for (int g = 0; g < G; ++g) {
      k.min_value = std::min(k.min_value, row[g]);
      k.max_value = std::max(k.max_value, row[g]);
      k.max_deriv = std::max(k.max_deriv, std::abs(drow[g]));
    }
  }
  return k;
}

} // namespace abp
