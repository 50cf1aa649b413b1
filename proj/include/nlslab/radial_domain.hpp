#pragma once

// Radial grids on a ball of radius r_max in R^n and the pointwise / local
// operators that act on radial fields sampled on them.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace nlslab {

using cplx = std::complex<double>;

/// Uniform cell-centred radial grid, r_i = (i + 1/2) h with h = r_max / N.
///
/// Weights are the midpoint rule times the sphere measure,
/// w_i = |S^{n-1}| r_i^{n-1} h, so that sum_i w_i f(r_i) approximates the
/// integral of a radial f over the ball. For odd n the integrand r^{n-1} f is
/// even in r and the rule is spectrally accurate for smooth decaying f.
class RadialGrid {
 public:
  RadialGrid(int dimension, std::size_t node_count, double r_max);

  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double r_max() const noexcept { return r_max_; }
  double spacing() const noexcept { return spacing_; }
  /// Surface area of the unit sphere S^{n-1}.
  double sphere_area() const noexcept { return sphere_area_; }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> sqrt_weights() const noexcept { return sqrt_weights_; }

  bool operator==(const RadialGrid& other) const noexcept {
    return dimension_ == other.dimension_ && size() == other.size() &&
           r_max_ == other.r_max_;
  }

 private:
  int dimension_;
  double r_max_;
  double spacing_;
  double sphere_area_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> sqrt_weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(int dimension, std::size_t node_count, double r_max);

/// One complex radial snapshot u(t, .) sampled on a grid.
struct RadialField {
  GridPtr grid;
  std::vector<cplx> values;

  RadialField() = default;
  RadialField(GridPtr g, std::vector<cplx> v);

  static RadialField zeros(GridPtr g);
  static RadialField sample(GridPtr g, const std::function<cplx(double)>& f);

  std::size_t size() const noexcept { return values.size(); }
  std::vector<double> abs() const;
};

/// Energy-critical exponents for dimension n.
double nonlinearity_power(int n);  // 4/(n-2)
double critical_exponent(int n);   // 2n/(n-2), the L^p of the potential term
double spacetime_exponent(int n);  // 2(n+2)/(n-2)

/// sum_i w_i f_i. Rejects non-finite samples.
double integrate(const RadialGrid& grid, std::span<const double> f);

/// (integral |u|^p)^{1/p}; p = infinity gives max |u_i|.
double lp_norm(const RadialField& u, double p);

/// sum_i w_i |u_i|^p without the root; used for the critical densities.
double abs_pow_integral(const RadialField& u, double p);

/// Second-order finite-difference radial Laplacian u_rr + (n-1)/r u_r.
/// The first node uses the even reflection u(-r_0) = u(r_0); the last node
/// uses a zero ghost value.
RadialField radial_laplacian(const RadialField& u);

/// d/dr u by eighth-order central differences, even reflection at the origin
/// and zero extension past the last node.
std::vector<cplx> radial_derivative(const RadialField& u);

/// max over the last node of |u| relative to max |u| (0 for the zero field).
double boundary_decay_ratio(const RadialField& u);

struct RescaleResult {
  RadialField field;
  /// True when part of the rescaled profile above the decay threshold would
  /// land outside r_max and was dropped.
  bool truncated = false;
};

/// lambda^{-(n-2)/2} u(r / lambda), resampled with a cubic B-spline built on
/// the even extension of u.
RescaleResult rescale(const RadialField& u, double lambda,
                      double decay_threshold = 1e-8);

}  // namespace nlslab
