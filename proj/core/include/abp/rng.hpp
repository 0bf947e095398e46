#ifndef ABP_RNG_HPP
#define ABP_RNG_HPP

#include <cstdint>
#include <random>

namespace abp {

/// Reproducible normal-variate stream. A (seed, stream_id) pair fully
/// determines the sequence: the engine is std::mt19937_64 (bit-exact across
/// platforms by the standard) seeded through a splitmix64 chain, and normals
/// come from an explicit Box-Muller transform so no implementation-defined
/// library distribution is involved. Generator version tag: "mt19937_64/bm-1".
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Standard normal draw; returns 0 when zero-noise test mode is on (the
  /// underlying uniform draws are still consumed, keeping streams aligned).
  double normal();

  /// Uniform on (0,1].
  double uniform();

  void set_zero_noise(bool on) { zero_noise_ = on; }
  bool zero_noise() const { return zero_noise_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
  bool zero_noise_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace abp

#endif
