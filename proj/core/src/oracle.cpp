#include "abp/oracle.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "abp/errors.hpp"
#include "abp/geometry.hpp"

namespace abp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// Half-spectrum S_k = sum_g f_g exp(-2 pi i k g / R), k = 0..R/2 (unnormalized).
std::vector<std::complex<double>> half_spectrum(const std::vector<double>& f) {
  int R = static_cast<int>(f.size());
  std::vector<double> in(f);
  std::vector<std::complex<double>> out(R / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_r2c_1d(R, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> inverse_half_spectrum(std::vector<std::complex<double>> spec, int R) {
  std::vector<double> out(R);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_c2r_1d(R, reinterpret_cast<fftw_complex*>(spec.data()), out.data(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

} // namespace

std::vector<double> periodic_antiderivative(const std::vector<double>& f) {
  int R = static_cast<int>(f.size());
  auto spec = half_spectrum(f);
  spec[0] = 0.0; // drop the mean; result is the zero-mean periodic primitive
  for (int k = 1; k < R / 2; ++k) spec[k] /= std::complex<double>(0.0, kTwoPi * k);
  if (R % 2 == 0) spec[R / 2] = 0.0; // Nyquist primitive vanishes at the nodes
  auto out = inverse_half_spectrum(std::move(spec), R);
  for (double& x : out) x /= R;
  return out;
}

std::vector<double> periodic_derivative(const std::vector<double>& f) {
  int R = static_cast<int>(f.size());
  auto spec = half_spectrum(f);
  for (int k = 0; k < R / 2; ++k) spec[k] *= std::complex<double>(0.0, kTwoPi * k);
  if (R % 2 == 0) spec[R / 2] = 0.0;
  auto out = inverse_half_spectrum(std::move(spec), R);
  for (double& x : out) x /= R;
  return out;
}

std::vector<double> trig_resample(const std::vector<double>& f, int out_size) {
  int G = static_cast<int>(f.size());
  if (out_size == G) return f;
  if (out_size < G) throw DomainError("trig_resample: only upsampling is supported");
  auto spec = half_spectrum(f);
  std::vector<std::complex<double>> padded(out_size / 2 + 1, 0.0);
  for (int k = 0; k < G / 2; ++k) padded[k] = spec[k];
  if (G % 2 == 0) padded[G / 2] = 0.5 * spec[G / 2]; // split the Nyquist bin
  auto out = inverse_half_spectrum(std::move(padded), out_size);
  for (double& x : out) x /= G;
  return out;
}

namespace {

void require_torus(const Potential& V) {
  if (!V.periodic_domain || V.dim > 2)
    throw DomainError("oracle: unsupported preset (torus with d <= 2 required)");
}

// Rectangle-rule accumulation over the d-dimensional torus.
template <class F>
double torus_mean(int d, int R, F&& f) {
  if (d == 1) {
    std::vector<double> vals(R);
    double x[1];
    for (int i = 0; i < R; ++i) {
      x[0] = static_cast<double>(i) / R;
      vals[i] = f(std::span<const double>(x, 1));
    }
    return pairwise_mean(vals);
  }
  std::vector<double> rows(R);
  std::vector<double> vals(R);
  double x[2];
  for (int i = 0; i < R; ++i) {
    x[0] = static_cast<double>(i) / R;
    for (int j = 0; j < R; ++j) {
      x[1] = static_cast<double>(j) / R;
      vals[j] = f(std::span<const double>(x, 2));
    }
    rows[i] = pairwise_mean(vals);
  }
  return pairwise_mean(rows);
}

} // namespace

double equilibrium_average(const Potential& V, const Observable& phi, int resolution) {
  require_torus(V);
  double num = torus_mean(V.dim, resolution, [&](std::span<const double> x) {
    return phi.eval_config(x) * std::exp(-V.value(x));
  });
  double den = torus_mean(V.dim, resolution, [&](std::span<const double> x) {
    return std::exp(-V.value(x));
  });
  return num / den;
}

GridFunction free_energy_profile(const Potential& V, int out_size, int resolution) {
  require_torus(V);
  GridFunction a(1, out_size);
  if (V.dim == 1) {
    double x[1];
    for (int g = 0; g < out_size; ++g) {
      x[0] = a.node(g);
      a.v[g] = V.value(std::span<const double>(x, 1));
    }
  } else {
    std::vector<double> inner(resolution);
    double x[2];
    for (int g = 0; g < out_size; ++g) {
      x[0] = a.node(g);
      for (int j = 0; j < resolution; ++j) {
        x[1] = static_cast<double>(j) / resolution;
        inner[j] = std::exp(-V.value(std::span<const double>(x, 2)));
      }
      a.v[g] = -std::log(pairwise_mean(inner));
    }
  }
  // Recenter so the rectangle-rule integral of exp(-A) on the output grid is 1.
  GridFunction w = exp_of(a, -1.0);
  double shift = std::log(w.mean());
  for (double& x : a.v) x += shift;
  return a;
}

namespace {

// Smooth exp(-A) sampled on the quadrature grid with a kernel, landing on the
// output grid.
GridFunction kernel_smooth(const std::vector<double>& density, const KernelSpec& kernel,
                           int out_size) {
  int R = static_cast<int>(density.size());
  GridFunction out(1, out_size);
  std::vector<double> terms(R);
  double z[1], zeta[1];
  for (int g = 0; g < out_size; ++g) {
    z[0] = out.node(g);
    for (int j = 0; j < R; ++j) {
      zeta[0] = static_cast<double>(j) / R;
      terms[j] = kernel_eval(kernel, std::span<const double>(z, 1),
                             std::span<const double>(zeta, 1)) *
                 density[j];
    }
    out.v[g] = -std::log(pairwise_mean(terms));
  }
  GridFunction w = exp_of(out, -1.0);
  double shift = std::log(w.mean());
  for (double& x : out.v) x += shift;
  return out;
}

} // namespace

GridFunction smoothed_free_energy(const Potential& V, const KernelSpec& kernel,
                                  int out_size, int resolution) {
  if (kernel.m != 1) throw DomainError("smoothed_free_energy: 1-d colvar only");
  GridFunction a_star = free_energy_profile(V, resolution, resolution);
  GridFunction density = exp_of(a_star, -1.0);
  return kernel_smooth(density.v, kernel, out_size);
}

GridFunction smoothed_free_energy_extended(const Potential& V, const KernelSpec& kernel,
                                           double eps_ext, int out_size, int resolution) {
  if (kernel.m != 1) throw DomainError("smoothed_free_energy_extended: 1-d colvar only");
  if (!(eps_ext > 0)) throw DomainError("smoothed_free_energy_extended: eps must be > 0");
  GridFunction a_star = free_energy_profile(V, resolution, resolution);
  GridFunction density = exp_of(a_star, -1.0);
  // Coupling kernel exp(-|z-zeta|^2/(2 eps)): wrapped Gaussian of width sqrt(eps).
  KernelSpec coupling = KernelSpec::wrapped_gaussian(1, std::sqrt(eps_ext), 1.0, 8);
  GridFunction first = kernel_smooth(density.v, coupling, resolution);
  GridFunction first_density = exp_of(first, -1.0);
  return kernel_smooth(first_density.v, kernel, out_size);
}

BiasedAverage biased_average(const Potential& V, const GridFunction& A,
                             const Observable& phi, int resolution) {
  require_torus(V);
  if (A.m != 1) throw DomainError("biased_average: 1-d colvar only");
  std::vector<double> a_fine = trig_resample(A.v, resolution);
  auto a_at = [&](double z) {
    double s = wrap1(z) * resolution;
    int i = static_cast<int>(s);
    if (i >= resolution) i = resolution - 1;
    return a_fine[i]; // quadrature nodes coincide with the resampled grid
  };
  double num = torus_mean(V.dim, resolution, [&](std::span<const double> x) {
    return phi.eval_config(x) * std::exp(-(V.value(x) - a_at(x[0])));
  });
  double den = torus_mean(V.dim, resolution, [&](std::span<const double> x) {
    return std::exp(-(V.value(x) - a_at(x[0])));
  });
  return {num / den, den};
}

PoissonSolution solve_poisson_1d(const Potential& V, const GridFunction* A,
                                 const Observable& phi, int resolution) {
  require_torus(V);
  if (V.dim != 1) throw DomainError("solve_poisson_1d: d = 1 presets only");
  const int R = resolution;

  std::vector<double> a(R, 0.0);
  if (A) {
    if (A->m != 1) throw DomainError("solve_poisson_1d: 1-d bias only");
    a = trig_resample(A->v, R);
  }

  std::vector<double> v(R), va(R), phi_v(R);
  double x[1];
  for (int j = 0; j < R; ++j) {
    x[0] = static_cast<double>(j) / R;
    v[j] = V.value(std::span<const double>(x, 1));
    va[j] = v[j] - a[j];
    phi_v[j] = phi.eval_config(std::span<const double>(x, 1));
  }

  std::vector<double> boltz(R), boltz_a(R);
  for (int j = 0; j < R; ++j) {
    boltz[j] = std::exp(-v[j]);
    boltz_a[j] = std::exp(-va[j]);
  }
  double z0 = pairwise_mean(boltz);
  double z_a = pairwise_mean(boltz_a);

  std::vector<double> tmp(R);
  for (int j = 0; j < R; ++j) tmp[j] = phi_v[j] * boltz[j];
  double mu_phi = pairwise_mean(tmp) / z0;

  std::vector<double> rhs(R), integrand(R);
  for (int j = 0; j < R; ++j) {
    rhs[j] = std::exp(-a[j]) * (phi_v[j] - mu_phi);
    integrand[j] = boltz_a[j] * rhs[j];
  }
  double centering = pairwise_mean(integrand) / z_a;
  if (std::abs(centering) > 1e-10)
    throw InvariantError("solve_poisson_1d: right-hand side not centered against the biased equilibrium");

  std::vector<double> g = periodic_antiderivative(integrand);

  std::vector<double> exp_va(R);
  for (int j = 0; j < R; ++j) exp_va[j] = std::exp(va[j]);
  for (int j = 0; j < R; ++j) tmp[j] = exp_va[j] * g[j];
  double c = -pairwise_mean(tmp) / pairwise_mean(exp_va);

  PoissonSolution sol;
  sol.mu_star_phi = mu_phi;
  sol.psi_prime = GridFunction(1, R);
  for (int j = 0; j < R; ++j) sol.psi_prime.v[j] = exp_va[j] * (g[j] + c);

  sol.psi = GridFunction(1, R);
  sol.psi.v = periodic_antiderivative(sol.psi_prime.v);
  for (int j = 0; j < R; ++j) tmp[j] = sol.psi.v[j] * boltz_a[j];
  double center_psi = pairwise_mean(tmp) / z_a;
  for (double& p : sol.psi.v) p -= center_psi;

  // t * Var of the weighted estimator: the numerator integral has long-run
  // variance 2 mu_star^A(|Psi'|^2) and the weight denominator grows like
  // (Z/Z_A) t, so
  //     V_inf = 2 mu_star^A(|Psi'|^2) * (Z_A/Z)^2.
  // Invariant under constant shifts of A, and equal to 2 mu_star(|Psi'|^2)
  // when A = 0.
  for (int j = 0; j < R; ++j)
    tmp[j] = sol.psi_prime.v[j] * sol.psi_prime.v[j] * boltz_a[j];
  sol.v_inf = 2.0 * pairwise_mean(tmp) * z_a / (z0 * z0);

  // Independent defect check: 4th-order centered differences for L^A Psi.
  std::vector<double> va_prime = periodic_derivative(va);
  double h = 1.0 / R;
  double worst = 0.0;
  const auto& p = sol.psi.v;
  for (int j = 0; j < R; ++j) {
    int jm2 = (j + R - 2) % R, jm1 = (j + R - 1) % R;
    int jp1 = (j + 1) % R, jp2 = (j + 2) % R;
    double d1 = (-p[jp2] + 8 * p[jp1] - 8 * p[jm1] + p[jm2]) / (12 * h);
    double d2 = (-p[jp2] + 16 * p[jp1] - 30 * p[j] + 16 * p[jm1] - p[jm2]) / (12 * h * h);
    double lhs = d2 - va_prime[j] * d1;
    worst = std::max(worst, std::abs(lhs - rhs[j]));
  }
  sol.defect = worst;
  return sol;
}

double asymptotic_variance(const Potential& V, const GridFunction* A,
                           const Observable& phi, int resolution) {
  return solve_poisson_1d(V, A, phi, resolution).v_inf;
}

OracleTables build_oracle_tables(const Potential& V, const KernelSpec& kernel,
                                 const std::vector<Observable>& observables,
                                 int out_size, int resolution) {
  OracleTables t;
  for (const auto& o : observables) {
    t.observable_names.push_back(o.name);
    t.mu_star.push_back(equilibrium_average(V, o, resolution));
  }
  t.a_star = free_energy_profile(V, out_size, resolution);
  t.a_inf = smoothed_free_energy(V, kernel, out_size, resolution);
  for (const auto& o : observables) {
    BiasedAverage b = biased_average(V, t.a_inf, o, resolution);
    t.mu_star_biased.push_back(b.value);
    t.z_a_inf = b.z_a;
  }
  if (V.dim == 1) {
    for (std::size_t i = 0; i < observables.size(); ++i) {
      t.v_inf_unbiased.push_back(asymptotic_variance(V, nullptr, observables[i], resolution));
      PoissonSolution sol = solve_poisson_1d(V, &t.a_inf, observables[i], resolution);
      t.v_inf_ainf.push_back(sol.v_inf);
      if (i == 0) t.psi = sol.psi;
    }
  }
  return t;
}

} // namespace abp
