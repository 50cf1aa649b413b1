#pragma once

// Discrete Hankel transform of order nu = n/2 - 1 on a RadialGrid, the exact
// free propagator e^{it Delta} built on it, and the spectral multipliers
// |grad|^alpha.

#include <span>
#include <vector>

#include "nlslab/radial_domain.hpp"

namespace nlslab {

struct TransformOptions {
  /// Pointwise tolerance of the Gaussian self-test that certifies the time
  /// horizon of free_evolve.
  double horizon_tolerance = 1e-6;
  /// Upper end of the horizon search ladder.
  double horizon_cap = 64.0;
};

/// Orthogonal expansion in the Dirichlet Laplacian eigenmodes of the ball,
/// phi_m(r) = r^{-nu} J_nu(k_m r), k_m = j_{nu,m} / r_max.
///
/// The sampled modes A_im = sqrt(w_i) phi_m(r_i), normalised in the
/// continuum, are discretely orthogonal for odd n; there the analysis matrix
/// is A^T after column normalisation and the transform is an exact isometry
/// of the quadrature inner product. For even n the midpoint rule is not
/// exact on the mode products and the analysis matrix is A^{-1}
/// (collocation), which keeps pointwise accuracy; the isometry then holds to
/// quadrature accuracy. Forward and backward transforms are dense O(N^2)
/// products.
///
/// At construction the transform certifies the longest time for which the
/// free evolution of exp(-r^2) matches its closed form within
/// horizon_tolerance; free_evolve refuses longer times.
class SpectralTransform {
 public:
  explicit SpectralTransform(GridPtr grid, TransformOptions options = {});

  const GridPtr& grid() const noexcept { return grid_; }
  double order() const noexcept { return order_; }
  std::span<const double> frequencies() const noexcept { return frequencies_; }
  std::size_t size() const noexcept { return frequencies_.size(); }

  /// Coefficients c = S (sqrt(w) .* u), S the analysis matrix.
  std::vector<cplx> forward(const RadialField& u) const;
  /// u = (A c) ./ sqrt(w).
  RadialField backward(std::span<const cplx> coefficients) const;

  /// Applies the Fourier multiplier m(k_j) to u.
  RadialField apply_multiplier(const RadialField& u,
                               std::span<const cplx> multiplier) const;

  /// Propagates in place by the precomputed phases exp(-i tau k_j^2).
  void propagate_in_place(std::vector<cplx>& values,
                          std::span<const cplx> phases) const;
  std::vector<cplx> free_phases(double t) const;

  /// sum k_j^2 |c_j|^2 = ||grad u||_{L^2}^2 in the discrete model.
  double gradient_norm_squared(const RadialField& u) const;

  double validated_horizon() const noexcept { return horizon_; }
  /// Max |backward(forward(g)) - g| on the reference Gaussian.
  double round_trip_error() const noexcept { return round_trip_error_; }

 private:
  void certify(const TransformOptions& options);

  GridPtr grid_;
  double order_;
  std::vector<double> frequencies_;
  std::vector<double> basis_;     // synthesis A, row-major, N x N (row = node)
  std::vector<double> basis_t_;   // analysis S, row-major
  double horizon_ = 0.0;
  double round_trip_error_ = 0.0;
};

/// e^{it Delta} u. Unitary in the quadrature inner product (odd n exactly); t = 0 returns u
/// unchanged. Throws outside_validated_range when |t| exceeds the
/// certified horizon.
RadialField free_evolve(const SpectralTransform& transform, const RadialField& u,
                        double t);

/// |grad|^alpha u as the multiplier k^alpha, alpha in (-n, 2].
RadialField fractional_power(const SpectralTransform& transform,
                             const RadialField& u, double alpha);

struct DispersiveFit {
  double slope = 0.0;      // least-squares d log ||u(t)||_inf / d log t
  double intercept = 0.0;
  /// max_t ||e^{it Delta}u||_inf t^{n/2} / ||u||_{L^1}
  double empirical_constant = 0.0;
  std::vector<double> sup_norms;
};

DispersiveFit dispersive_decay_fit(const SpectralTransform& transform,
                                   const RadialField& u,
                                   std::span<const double> times);

}  // namespace nlslab
