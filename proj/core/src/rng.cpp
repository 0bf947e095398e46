#include "abp/rng.hpp"

#include <cmath>
#include <numbers>

namespace abp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id),
      gen_(splitmix64(splitmix64(seed) ^ splitmix64(stream_id + 0x1234567887654321ULL))) {}

double RngStream::uniform() {
  // 53-bit mantissa; +1 keeps the value strictly positive for the log below.
  return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return zero_noise_ ? 0.0 : spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  double value = r * std::cos(angle);
  return zero_noise_ ? 0.0 : value;
}

} // namespace abp
