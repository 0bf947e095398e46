#ifndef ABP_GRID_FUNCTION_HPP
#define ABP_GRID_FUNCTION_HPP

#include <span>
#include <vector>

namespace abp {

/// Scalar function sampled on the uniform grid {0, 1/G, ..., (G-1)/G}^m of the
/// flat torus, m in {1,2}. Values are stored row-major for m=2. Rectangle-rule
/// integrals over the torus reduce to plain means because the cell volume is
/// 1/G^m and the total volume is 1.
struct GridFunction {
  int m = 1;
  int size = 0;
  std::vector<double> v;

  GridFunction() = default;
  GridFunction(int m_, int size_, double fill = 0.0);

  std::size_t node_count() const { return v.size(); }
  double spacing() const { return 1.0 / size; }

  std::size_t index(int i) const { return static_cast<std::size_t>(i); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * size + j;
  }
  /// Coordinate of node i along one axis.
  double node(int i) const { return static_cast<double>(i) / size; }

  /// Rectangle-rule mean over the torus (== integral, volume is 1).
  double mean() const;
  double min() const;
  double max() const;

  /// Periodic multilinear interpolation at z in [0,1)^m.
  double interp(std::span<const double> z) const;
  double interp1(double z) const;

  bool all_positive() const;
  bool all_finite() const;
};

/// exp/-log applied nodewise.
GridFunction exp_of(const GridFunction& f, double scale = 1.0);
GridFunction neg_log_of(const GridFunction& f);

/// Sample an analytic function of one torus coordinate on a size-G grid.
template <class F>
GridFunction sample_grid1(int G, F&& f) {
  GridFunction g(1, G);
  for (int i = 0; i < G; ++i) g.v[i] = f(static_cast<double>(i) / G);
  return g;
}

} // namespace abp

#endif
