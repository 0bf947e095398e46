#include "abp/model.hpp"

#include <cmath>
#include <numbers>

#include "abp/errors.hpp"
#include "abp/geometry.hpp"

namespace abp {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Potential Potential::zero(int dim, bool periodic) {
  if (dim == 1) return cosine1({});
  if (dim == 2 && periodic) return cosine2(0.0, 0.0, 0.0);
  Potential p = quadratic_cosine(dim, 1.0, 0.0);
  if (periodic) throw DomainError("zero potential: periodic only for d<=2");
  return p;
}

Potential Potential::cosine1(std::vector<double> c, double beta) {
  Potential p;
  p.kind = Kind::Cosine1;
  p.dim = 1;
  p.periodic_domain = true;
  p.beta = beta;
  for (double& x : c) x *= beta;
  p.coeff = std::move(c);
  return p;
}

Potential Potential::cosine2(double a, double b, double c, double beta) {
  Potential p;
  p.kind = Kind::Cosine2;
  p.dim = 2;
  p.periodic_domain = true;
  p.beta = beta;
  p.coeff = {beta * a, beta * b, beta * c};
  return p;
}

Potential Potential::quadratic_cosine(int dim, double a, double c, double beta) {
  if (!(a > 0.0))
    throw ConfigError("model.coefficients", "quadratic coefficient must be > 0 (confinement)");
  Potential p;
  p.kind = Kind::QuadraticCosine;
  p.dim = dim;
  p.periodic_domain = false;
  p.beta = beta;
  p.coeff = {beta * a, beta * c};
  return p;
}

Potential Potential::tabulated(const std::vector<double>& samples, double beta) {
  int G = static_cast<int>(samples.size());
  if (G < 4 || G % 2 != 0)
    throw ConfigError("model.coefficients", "tabulated potential needs an even sample count >= 4");
  Potential p;
  p.kind = Kind::Tabulated;
  p.dim = 1;
  p.periodic_domain = true;
  p.beta = beta;
  // Trigonometric interpolant through the samples: smooth on the torus with
  // an explicit derivative. Direct DFT; tables are small.
  int half = G / 2;
  p.trig_cos.assign(half + 1, 0.0);
  p.trig_sin.assign(half + 1, 0.0);
  for (int k = 0; k <= half; ++k) {
    double ac = 0.0, as = 0.0;
    for (int g = 0; g < G; ++g) {
      double phase = kTwoPi * k * g / G;
      ac += samples[g] * std::cos(phase);
      as += samples[g] * std::sin(phase);
    }
    double w = (k == 0 || k == half) ? 1.0 / G : 2.0 / G;
    p.trig_cos[k] = beta * w * ac;
    p.trig_sin[k] = beta * w * as;
  }
  p.trig_sin[half] = 0.0; // Nyquist sine is not resolvable on the sample grid
  return p;
}

double Potential::value(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) throw DomainError("Potential::value: dimension mismatch");
  switch (kind) {
    case Kind::Cosine1: {
      double v = 0.0;
      for (std::size_t k = 0; k < coeff.size(); ++k)
        v += coeff[k] * std::cos(kTwoPi * static_cast<double>(k + 1) * x[0]);
      return v;
    }
    case Kind::Cosine2: {
      double c1 = std::cos(kTwoPi * x[0]);
      double c2 = std::cos(kTwoPi * x[1]);
      return coeff[0] * c1 + coeff[1] * c2 + coeff[2] * c1 * c2;
    }
    case Kind::QuadraticCosine: {
      double v = 0.0;
      for (double xi : x) v += 0.5 * coeff[0] * xi * xi + coeff[1] * std::cos(kTwoPi * xi);
      return v;
    }
    case Kind::Tabulated: {
      double v = 0.0;
      for (std::size_t k = 0; k < trig_cos.size(); ++k) {
        double phase = kTwoPi * static_cast<double>(k) * x[0];
        v += trig_cos[k] * std::cos(phase) + trig_sin[k] * std::sin(phase);
      }
      return v;
    }
  }
  throw DomainError("Potential::value: unknown kind");
}

void Potential::gradient(std::span<const double> x, std::span<double> g) const {
  if (static_cast<int>(x.size()) != dim || g.size() != x.size())
    throw DomainError("Potential::gradient: dimension mismatch");
  switch (kind) {
    case Kind::Cosine1: {
      double d = 0.0;
      for (std::size_t k = 0; k < coeff.size(); ++k) {
        double w = kTwoPi * static_cast<double>(k + 1);
        d += -coeff[k] * w * std::sin(w * x[0]);
      }
      g[0] = d;
      return;
    }
    case Kind::Cosine2: {
      double c1 = std::cos(kTwoPi * x[0]), s1 = std::sin(kTwoPi * x[0]);
      double c2 = std::cos(kTwoPi * x[1]), s2 = std::sin(kTwoPi * x[1]);
      g[0] = -kTwoPi * s1 * (coeff[0] + coeff[2] * c2);
      g[1] = -kTwoPi * s2 * (coeff[1] + coeff[2] * c1);
      return;
    }
    case Kind::QuadraticCosine: {
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = coeff[0] * x[i] - coeff[1] * kTwoPi * std::sin(kTwoPi * x[i]);
      return;
    }
    case Kind::Tabulated: {
      double d = 0.0;
      for (std::size_t k = 1; k < trig_cos.size(); ++k) {
        double w = kTwoPi * static_cast<double>(k);
        double phase = w * x[0];
        d += -trig_cos[k] * w * std::sin(phase) + trig_sin[k] * w * std::cos(phase);
      }
      g[0] = d;
      return;
    }
  }
  throw DomainError("Potential::gradient: unknown kind");
}

int DynamicsSpec::state_dim() const {
  switch (family) {
    case Family::Brownian: return potential.dim;
    case Family::Langevin: return 2 * potential.dim;
    case Family::Extended: return potential.dim + xi.m;
  }
  return 0;
}

std::vector<std::uint8_t> DynamicsSpec::periodic_flags() const {
  int d = potential.dim;
  std::vector<std::uint8_t> flags;
  std::uint8_t cfg = potential.periodic_domain ? 1 : 0;
  switch (family) {
    case Family::Brownian:
      flags.assign(d, cfg);
      break;
    case Family::Langevin:
      flags.assign(d, cfg);
      flags.insert(flags.end(), d, 0); // momenta
      break;
    case Family::Extended:
      flags.assign(d, cfg);
      flags.insert(flags.end(), xi.m, 1); // auxiliary torus variable
      break;
  }
  return flags;
}

std::vector<double> DynamicsSpec::initial_state(std::span<const double> x0) const {
  if (static_cast<int>(x0.size()) != potential.dim)
    throw DomainError("initial_state: x0 dimension mismatch");
  std::vector<double> s(x0.begin(), x0.end());
  if (potential.periodic_domain) wrap_in_place(s);
  switch (family) {
    case Family::Brownian:
      return s;
    case Family::Langevin:
      s.insert(s.end(), potential.dim, 0.0); // p0 = 0
      return s;
    case Family::Extended: {
      std::vector<double> z(xi.m);
      for (int i = 0; i < xi.m; ++i) z[i] = wrap1(s[i]);
      s.insert(s.end(), z.begin(), z.end());
      return s;
    }
  }
  return s;
}

void DynamicsSpec::xi_state(std::span<const double> state, std::span<double> z_out) const {
  int m = xi.m;
  if (static_cast<int>(z_out.size()) != m) throw DomainError("xi_state: bad output size");
  switch (family) {
    case Family::Brownian:
    case Family::Langevin:
      for (int i = 0; i < m; ++i) z_out[i] = wrap1(state[i]);
      return;
    case Family::Extended: {
      int d = potential.dim;
      for (int i = 0; i < m; ++i) z_out[i] = wrap1(state[d + i]);
      return;
    }
  }
}

void DynamicsSpec::config_force(std::span<const double> q, const BiasFunction& bias,
                                std::span<double> out) const {
  potential.gradient(q, out);
  for (double& f : out) f = -f;
  int m = xi.m;
  double zbuf[2];
  double gbuf[2];
  std::span<double> z(zbuf, m), gA(gbuf, m);
  for (int i = 0; i < m; ++i) z[i] = wrap1(q[i]);
  bias.gradient(z, gA);
  for (int i = 0; i < m; ++i) out[i] += gA[i];
}

void DynamicsSpec::drift(std::span<const double> state, const BiasFunction& bias,
                         std::span<double> out) const {
  if (static_cast<int>(state.size()) != state_dim() || out.size() != state.size())
    throw DomainError("drift: dimension mismatch");
  int d = potential.dim;
  int m = xi.m;
  switch (family) {
    case Family::Brownian: {
      config_force(state, bias, out);
      return;
    }
    case Family::Langevin: {
      auto q = state.subspan(0, d);
      auto p = state.subspan(d, d);
      for (int i = 0; i < d; ++i) out[i] = p[i];
      config_force(q, bias, out.subspan(d, d));
      for (int i = 0; i < d; ++i) out[d + i] -= gamma * p[i];
      return;
    }
    case Family::Extended: {
      auto x = state.subspan(0, d);
      auto z = state.subspan(d, m);
      potential.gradient(x, out.subspan(0, d));
      for (int i = 0; i < d; ++i) out[i] = -out[i];
      double gbuf[2];
      std::span<double> gA(gbuf, m);
      bias.gradient(z, gA);
      for (int i = 0; i < m; ++i) {
        double delta = periodic_displacement1(wrap1(x[i]), z[i]);
        out[i] += -(delta / eps_ext);
        out[d + i] = delta / eps_ext + gA[i];
      }
      return;
    }
  }
}

double DynamicsSpec::total_energy(std::span<const double> state,
                                  const BiasFunction& bias) const {
  int d = potential.dim;
  int m = xi.m;
  double zbuf[2];
  std::span<double> z(zbuf, m);
  xi_state(state, z);
  double a = bias.value(z);
  switch (family) {
    case Family::Brownian:
      return potential.value(state) - a;
    case Family::Langevin: {
      double kin = 0.0;
      for (int i = 0; i < d; ++i) kin += 0.5 * state[d + i] * state[d + i];
      return potential.value(state.subspan(0, d)) + kin - a;
    }
    case Family::Extended: {
      auto x = state.subspan(0, d);
      double coupling = 0.0;
      for (int i = 0; i < m; ++i) {
        double delta = periodic_displacement1(wrap1(x[i]), state[d + i]);
        coupling += delta * delta;
      }
      return potential.value(x) + coupling / (2.0 * eps_ext) - a;
    }
  }
  throw DomainError("total_energy: unknown family");
}

} // namespace abp
