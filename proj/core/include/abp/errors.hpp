#ifndef ABP_ERRORS_HPP
#define ABP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace abp {

/// Invalid or out-of-range configuration value. `key` is the dotted key path
/// (e.g. "kernel.alpha") when the error originates from a config document.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message),
        key_(std::move(key)) {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

/// A trajectory produced a non-finite coordinate. Carries the step index and
/// simulation time at which the blowup was detected.
class BlowupError : public std::runtime_error {
public:
  BlowupError(const std::string& message, long step, double time)
      : std::runtime_error(message + " (step " + std::to_string(step) +
                           ", t=" + std::to_string(time) + ")"),
        step_(step), time_(time) {}
  long step() const { return step_; }
  double time() const { return time_; }

private:
  long step_;
  double time_;
};

/// Mathematical precondition violated (nonpositive density, dimension
/// mismatch, non-finite input, ...).
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& message)
      : std::runtime_error(message) {}
};

/// A hard internal invariant failed (a-priori bias bounds, centering of a
/// Poisson right-hand side). These are never tolerated.
class InvariantError : public std::logic_error {
public:
  explicit InvariantError(const std::string& message)
      : std::logic_error(message) {}
};

} // namespace abp

#endif
