#ifndef ABP_GEOMETRY_HPP
#define ABP_GEOMETRY_HPP

#include <span>
#include <vector>

namespace abp {

/// Point on the flat torus [0,1)^d. Every coordinate stays in [0,1) after any
/// operation of this module.
struct TorusPoint {
  std::vector<double> coords;

  TorusPoint() = default;
  explicit TorusPoint(std::vector<double> c) : coords(std::move(c)) {}
  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
};

/// Unconstrained point in R^d (momenta, non-compact configurations).
struct EuclideanPoint {
  std::vector<double> coords;

  EuclideanPoint() = default;
  explicit EuclideanPoint(std::vector<double> c) : coords(std::move(c)) {}
  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
};

/// x mod 1 in [0,1). Guards against the rounding case where x - floor(x)
/// evaluates to 1.0 for tiny negative x.
double wrap1(double x);

/// Shortest signed arc from b to a, congruent to a-b mod 1, in [-0.5, 0.5).
/// The antipodal tie resolves to -0.5 (half-open convention).
double periodic_displacement1(double a, double b);

/// Componentwise wrap; throws DomainError on non-finite input.
TorusPoint wrap(std::span<const double> x);

void wrap_in_place(std::span<double> x);

/// Componentwise shortest arc; throws DomainError on dimension mismatch.
std::vector<double> periodic_displacement(const TorusPoint& a, const TorusPoint& b);

void periodic_displacement(std::span<const double> a, std::span<const double> b,
                           std::span<double> out);

/// Numerically careful mean: pairwise reduction, exact for constant input when
/// the length is a power of two.
double pairwise_sum(std::span<const double> v);
double pairwise_mean(std::span<const double> v);

} // namespace abp

#endif
