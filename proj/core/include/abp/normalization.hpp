#ifndef ABP_NORMALIZATION_HPP
#define ABP_NORMALIZATION_HPP

#include <string>
#include <vector>

#include "abp/grid_function.hpp"

namespace abp {

/// Positive-homogeneous normalization functional n on strictly positive grid
/// functions, with N(f) = f / n(f). Built-in kinds all satisfy the axioms
/// (sandwich between min and max, homogeneity, 1-Lipschitz in sup norm) with
/// constants equal to 1.
///
/// Kinds: L1 mean (the default; then F equals the probability density), Lq
/// mean of order q >= 1, point evaluation at z0, exact min/max, and their
/// smooth order-k approximations (k > 0 replaces min/max by the Lq proxies
/// 1/n_k(1/f) and n_k(f)).
struct NormalizationSpec {
  enum class Kind { L1, Lq, Point, Min, Max };

  Kind kind = Kind::L1;
  double q = 1.0;              // Lq
  std::vector<double> z0;      // Point
  int smoothing_index = 0;     // Min/Max: 0 -> exact, k > 0 -> smooth proxy

  static NormalizationSpec l1();
  static NormalizationSpec lq(double q);
  static NormalizationSpec point(std::vector<double> z0);
  static NormalizationSpec min(int smoothing_index = 0);
  static NormalizationSpec max(int smoothing_index = 0);

  /// Parse "l1", "lq:<q>", "point:<z0>", "min", "max".
  static NormalizationSpec parse(const std::string& text);
  std::string to_string() const;
};

/// n(f). Throws DomainError on nonpositive input.
double n_value(const NormalizationSpec& spec, const GridFunction& f);

/// N(f) = f / n(f); a projection (normalize of normalize is a no-op).
GridFunction normalize(const NormalizationSpec& spec, const GridFunction& f);

/// f / integral(f): rectangle-rule probability density on the torus.
GridFunction prob_density(const GridFunction& f);

} // namespace abp

#endif
