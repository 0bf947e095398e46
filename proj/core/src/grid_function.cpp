#include "abp/grid_function.hpp"

#include <algorithm>
#include <cmath>

#include "abp/errors.hpp"
#include "abp/geometry.hpp"

namespace abp {

GridFunction::GridFunction(int m_, int size_, double fill) : m(m_), size(size_) {
  if (m_ != 1 && m_ != 2) throw DomainError("GridFunction: m must be 1 or 2");
  if (size_ < 2) throw DomainError("GridFunction: size must be >= 2");
  std::size_t n = static_cast<std::size_t>(size_);
  if (m_ == 2) n *= static_cast<std::size_t>(size_);
  v.assign(n, fill);
}

double GridFunction::mean() const { return pairwise_mean(v); }

double GridFunction::min() const { return *std::min_element(v.begin(), v.end()); }

double GridFunction::max() const { return *std::max_element(v.begin(), v.end()); }

double GridFunction::interp1(double z) const {
  double s = wrap1(z) * size;
  int i0 = static_cast<int>(s);
  if (i0 >= size) i0 = size - 1;
  double frac = s - i0;
  int i1 = (i0 + 1 == size) ? 0 : i0 + 1;
  return v[i0] * (1.0 - frac) + v[i1] * frac;
}

double GridFunction::interp(std::span<const double> z) const {
  if (static_cast<int>(z.size()) != m)
    throw DomainError("GridFunction::interp: dimension mismatch");
  if (m == 1) return interp1(z[0]);
  double s0 = wrap1(z[0]) * size;
  double s1 = wrap1(z[1]) * size;
  int i0 = static_cast<int>(s0);
  int j0 = static_cast<int>(s1);
  if (i0 >= size) i0 = size - 1;
  if (j0 >= size) j0 = size - 1;
  double fi = s0 - i0, fj = s1 - j0;
  int i1 = (i0 + 1 == size) ? 0 : i0 + 1;
  int j1 = (j0 + 1 == size) ? 0 : j0 + 1;
  return v[index(i0, j0)] * (1 - fi) * (1 - fj) + v[index(i1, j0)] * fi * (1 - fj) +
         v[index(i0, j1)] * (1 - fi) * fj + v[index(i1, j1)] * fi * fj;
}

bool GridFunction::all_positive() const {
  return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
}

bool GridFunction::all_finite() const {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

GridFunction exp_of(const GridFunction& f, double scale) {
  GridFunction g = f;
  for (double& x : g.v) x = std::exp(scale * x);
  return g;
}

GridFunction neg_log_of(const GridFunction& f) {
  GridFunction g = f;
  for (double& x : g.v) {
    if (!(x > 0.0)) throw DomainError("neg_log_of: nonpositive value");
    x = -std::log(x);
  }
  return g;
}

} // namespace abp
