#ifndef ABP_INTEGRATORS_HPP
#define ABP_INTEGRATORS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "abp/rng.hpp"

namespace abp {

/// Time-stepping choices for the finite-dimensional dynamics.
struct StepperConfig {
  enum class Scheme { EulerMaruyama, BAOAB };
  double dt = 1e-3;
  Scheme scheme = Scheme::EulerMaruyama;

  static StepperConfig::Scheme parse_scheme(const std::string& text);
  static std::string scheme_name(Scheme s);
};

/// Euler-Maruyama step with unit diffusion: x += dt*drift + sqrt(2 dt)*xi,
/// wrapping coordinates flagged periodic. Throws BlowupError (with the given
/// step/time context) if a non-finite coordinate appears.
void em_step(std::span<double> x, std::span<const double> drift,
             std::span<const std::uint8_t> periodic, double dt, RngStream& rng,
             long step = -1, double time = 0.0);

using ForceFn = std::function<void(std::span<const double> q, std::span<double> f)>;

/// BAOAB splitting for Langevin dynamics at unit temperature: half kick, half
/// drift, exact Ornstein-Uhlenbeck refresh of the momenta
/// (p <- exp(-gamma dt) p + sqrt(1 - exp(-2 gamma dt)) xi), half drift, half
/// kick. `force` evaluates -grad(V - A o xi); `scratch` must have q.size()
/// entries.
void baoab_step(std::span<double> q, std::span<double> p, const ForceFn& force,
                std::span<const std::uint8_t> q_periodic, double gamma, double dt,
                RngStream& rng, std::span<double> scratch, long step = -1,
                double time = 0.0);

} // namespace abp

#endif
