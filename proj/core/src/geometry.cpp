#include "abp/geometry.hpp"

#include <cmath>

#include "abp/errors.hpp"

namespace abp {

double wrap1(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  if (r < 0.0) r = 0.0;
  return r;
}

double periodic_displacement1(double a, double b) {
  double d = a - b;
  d -= std::floor(d + 0.5);
  if (d >= 0.5) d -= 1.0; // rounding guard at the antipode
  return d;
}

TorusPoint wrap(std::span<const double> x) {
  TorusPoint p;
  p.coords.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]))
      throw DomainError("wrap: non-finite coordinate");
    p.coords[i] = wrap1(x[i]);
  }
  return p;
}

void wrap_in_place(std::span<double> x) {
  for (double& c : x) {
    if (!std::isfinite(c)) throw DomainError("wrap: non-finite coordinate");
    c = wrap1(c);
  }
}

std::vector<double> periodic_displacement(const TorusPoint& a, const TorusPoint& b) {
  if (a.dim() != b.dim())
    throw DomainError("periodic_displacement: dimension mismatch");
  std::vector<double> out(a.dim());
  periodic_displacement(a.coords, b.coords, out);
  return out;
}

void periodic_displacement(std::span<const double> a, std::span<const double> b,
                           std::span<double> out) {
  if (a.size() != b.size() || a.size() != out.size())
    throw DomainError("periodic_displacement: dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = periodic_displacement1(a[i], b[i]);
}

namespace {
// Strict pairwise reduction. For a constant vector whose length is a power of
// two every partial sum is value*2^k, so the result is exact.
double pairwise_sum_rec(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n == 1) return v[0];
  if (n == 2) return v[0] + v[1];
  std::size_t half = n / 2;
  return pairwise_sum_rec(v, half) + pairwise_sum_rec(v + half, n - half);
}
} // namespace

double pairwise_sum(std::span<const double> v) {
  return pairwise_sum_rec(v.data(), v.size());
}

double pairwise_mean(std::span<const double> v) {
  if (v.empty()) throw DomainError("mean of empty vector");
  return pairwise_sum(v) / static_cast<double>(v.size());
}

} // namespace abp
