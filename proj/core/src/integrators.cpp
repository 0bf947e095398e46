#include "abp/integrators.hpp"

#include <cmath>

#include "abp/errors.hpp"
#include "abp/geometry.hpp"

namespace abp {

StepperConfig::Scheme StepperConfig::parse_scheme(const std::string& text) {
  if (text == "em" || text == "euler-maruyama") return Scheme::EulerMaruyama;
  if (text == "baoab") return Scheme::BAOAB;
  throw ConfigError("sim.scheme", "unknown scheme '" + text + "' (expected em or baoab)");
}

std::string StepperConfig::scheme_name(Scheme s) {
  return s == Scheme::EulerMaruyama ? "em" : "baoab";
}

namespace {
void check_finite(std::span<const double> x, const char* what, long step, double time) {
  for (double c : x)
    if (!std::isfinite(c)) throw BlowupError(std::string(what) + ": non-finite state", step, time);
}
} // namespace

void em_step(std::span<double> x, std::span<const double> drift,
             std::span<const std::uint8_t> periodic, double dt, RngStream& rng,
             long step, double time) {
  if (x.size() != drift.size() || x.size() != periodic.size())
    throw DomainError("em_step: dimension mismatch");
  double noise = std::sqrt(2.0 * dt);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] += dt * drift[i] + noise * rng.normal();
    if (periodic[i]) x[i] = wrap1(x[i]);
  }
  check_finite(x, "em_step", step, time);
}

void baoab_step(std::span<double> q, std::span<double> p, const ForceFn& force,
                std::span<const std::uint8_t> q_periodic, double gamma, double dt,
                RngStream& rng, std::span<double> scratch, long step, double time) {
  std::size_t d = q.size();
  if (p.size() != d || scratch.size() != d || q_periodic.size() != d)
    throw DomainError("baoab_step: dimension mismatch");

  force(q, scratch);
  for (std::size_t i = 0; i < d; ++i) p[i] += 0.5 * dt * scratch[i];

  for (std::size_t i = 0; i < d; ++i) {
    q[i] += 0.5 * dt * p[i];
    if (q_periodic[i]) q[i] = wrap1(q[i]);
  }

  double decay = std::exp(-gamma * dt);
  double kick = std::sqrt(std::max(0.0, 1.0 - decay * decay));
  for (std::size_t i = 0; i < d; ++i) p[i] = decay * p[i] + kick * rng.normal();

  for (std::size_t i = 0; i < d; ++i) {
    q[i] += 0.5 * dt * p[i];
    if (q_periodic[i]) q[i] = wrap1(q[i]);
  }

  force(q, scratch);
  for (std::size_t i = 0; i < d; ++i) p[i] += 0.5 * dt * scratch[i];

  check_finite(q, "baoab_step", step, time);
  check_finite(p, "baoab_step", step, time);
}

} // namespace abp
