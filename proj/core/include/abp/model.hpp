#ifndef ABP_MODEL_HPP
#define ABP_MODEL_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace abp {

/// Built-in potential energy presets. Presets are smooth with explicit
/// gradients; the confinement and regularity conditions the sampler relies on
/// hold by construction. The inverse temperature is folded in at build time
/// (V_eff = beta * V) so every downstream formula runs at unit temperature.
struct Potential {
  enum class Kind {
    Cosine1,          // T^1:  sum_k c_k cos(2 pi k x)
    Cosine2,          // T^2:  a cos(2pi x1) + b cos(2pi x2) + c cos(2pi x1) cos(2pi x2)
    QuadraticCosine,  // R^d:  0.5 a |x|^2 + c sum_i cos(2 pi x_i), a > 0
    Tabulated         // T^1:  trigonometric interpolant through grid samples
  };

  Kind kind = Kind::Cosine1;
  int dim = 1;
  bool periodic_domain = true;
  double beta = 1.0;                  // recorded; already folded into coefficients
  std::vector<double> coeff;

  // Tabulated: trig-interpolant coefficients (a_k, b_k), Nyquist in a.back().
  std::vector<double> trig_cos, trig_sin;

  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> g) const;

  static Potential zero(int dim, bool periodic = true);
  static Potential cosine1(std::vector<double> c, double beta = 1.0);
  static Potential cosine2(double a, double b, double c, double beta = 1.0);
  static Potential quadratic_cosine(int dim, double a, double c, double beta = 1.0);
  static Potential tabulated(const std::vector<double>& samples, double beta = 1.0);
};

/// Coordinate-projection reaction coordinate x -> (x_1..x_m) on T^m. The SPDE
/// module provides its own arctan-average map.
struct ReactionCoordinate {
  enum class Kind { Projection, SpdeArctan };
  Kind kind = Kind::Projection;
  int m = 1;
};

/// Bias A: T^m -> R seen by the dynamics: value and gradient.
class BiasFunction {
public:
  virtual ~BiasFunction() = default;
  virtual double value(std::span<const double> z) const = 0;
  virtual void gradient(std::span<const double> z, std::span<double> out) const = 0;
};

class ZeroBias : public BiasFunction {
public:
  double value(std::span<const double>) const override { return 0.0; }
  void gradient(std::span<const double>, std::span<double> out) const override {
    for (double& g : out) g = 0.0;
  }
};

/// Test/utility bias defined by callables.
class AnalyticBias : public BiasFunction {
public:
  AnalyticBias(std::function<double(std::span<const double>)> value,
               std::function<void(std::span<const double>, std::span<double>)> gradient)
      : value_(std::move(value)), gradient_(std::move(gradient)) {}
  double value(std::span<const double> z) const override { return value_(z); }
  void gradient(std::span<const double> z, std::span<double> out) const override {
    gradient_(z, out);
  }

private:
  std::function<double(std::span<const double>)> value_;
  std::function<void(std::span<const double>, std::span<double>)> gradient_;
};

/// Diffusion family with its potential and reaction coordinate.
///   Brownian:  state x on E_d,            dx = -grad(V - A o xi) dt + sqrt(2) dW
///   Langevin:  state (q,p),               dq = p dt, dp = force dt - gamma p dt + sqrt(2 gamma) dW
///   Extended:  state (x,z) on E_d x T^m,  Brownian flow of U(x,z) = V + |xi(x)-z|^2/(2 eps),
///              with the bias acting on the auxiliary variable z.
struct DynamicsSpec {
  enum class Family { Brownian, Langevin, Extended };

  Family family = Family::Brownian;
  Potential potential;
  ReactionCoordinate xi;
  double gamma = 1.0;     // Langevin friction
  double eps_ext = 0.1;   // Extended coupling width

  int config_dim() const { return potential.dim; }
  int state_dim() const;
  /// Per-coordinate periodicity of the state layout.
  std::vector<std::uint8_t> periodic_flags() const;
  /// Default initial state from a configuration point x0.
  std::vector<double> initial_state(std::span<const double> x0) const;

  /// Collective variable of the full state, on T^m.
  void xi_state(std::span<const double> state, std::span<double> z_out) const;

  /// Drift D(V, A) at `state`. For Langevin the layout is (q, p).
  void drift(std::span<const double> state, const BiasFunction& bias,
             std::span<double> out) const;

  /// Total energy E(V,0)(state) - A(xi_S(state)).
  double total_energy(std::span<const double> state, const BiasFunction& bias) const;

  /// Configuration-space force -grad(V - A o xi)(q), used by BAOAB.
  void config_force(std::span<const double> q, const BiasFunction& bias,
                    std::span<double> out) const;
};

} // namespace abp

#endif
