#include "nlslab/spectral_transform.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>

#include "nlslab/error.hpp"
#include "nlslab/kernels.hpp"

namespace nlslab {

namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Off-diagonal Gram entries below this are treated as round-off; the
// orthogonalisation then reduces to a column rescaling.
constexpr double gram_roundoff = 1e-12;

cplx gaussian_free_solution(double r, double t, int n) {
  const cplx denom(1.0, 4.0 * t);
  return std::pow(denom, -0.5 * n) * std::exp(-r * r / denom);
}

}  // namespace

SpectralTransform::SpectralTransform(GridPtr grid, TransformOptions options)
    : grid_(std::move(grid)) {
  if (!grid_) throw Error(ErrorCode::invalid_input, "transform without grid");
  const RadialGrid& g = *grid_;
  const std::size_t n = g.size();
  const int dim = g.dimension();
  order_ = 0.5 * dim - 1.0;
  const double r_max = g.r_max();

  std::vector<double> zeros;
  zeros.reserve(n);
  boost::math::cyl_bessel_j_zero(order_, 1, static_cast<unsigned>(n),
                                 std::back_inserter(zeros));
  frequencies_.resize(n);
  std::vector<double> norm(n);
  for (std::size_t m = 0; m < n; ++m) {
    frequencies_[m] = zeros[m] / r_max;
    const double jp = boost::math::cyl_bessel_j(order_ + 1.0, zeros[m]);
    norm[m] = 1.0 / std::sqrt(0.5 * g.sphere_area() * r_max * r_max * jp * jp);
  }

  RowMatrix a(n, n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double r = g.nodes()[i];
    const double scale = g.sqrt_weights()[i] * std::pow(r, -order_);
    for (std::size_t m = 0; m < n; ++m)
      a(ii, static_cast<std::ptrdiff_t>(m)) =
          scale * norm[m] * boost::math::cyl_bessel_j(order_, frequencies_[m] * r);
  }

  const Eigen::MatrixXd gram = a.transpose() * a;
  double off_diagonal = 0.0;
  for (Eigen::Index j = 0; j < gram.cols(); ++j)
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
      if (i != j) off_diagonal = std::max(off_diagonal, std::abs(gram(i, j)));

  RowMatrix synthesis;
  RowMatrix analysis;
  if (off_diagonal < gram_roundoff) {
    synthesis = a * gram.diagonal().cwiseSqrt().cwiseInverse().asDiagonal();
    analysis = synthesis.transpose();
  } else {
    // Collocation: the modes interpolate the samples exactly. The Gram
    // deviation only enters through the quadrature norm.
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-13))
      throw Error(ErrorCode::grid_too_coarse,
                  "sampled Bessel modes are linearly dependent on this grid");
    synthesis = a;
    analysis = lu.inverse();
  }

  basis_.assign(synthesis.data(), synthesis.data() + n * n);
  basis_t_.assign(analysis.data(), analysis.data() + n * n);

  certify(options);
}

void SpectralTransform::certify(const TransformOptions& options) {
  const GridPtr& g = grid_;
  const int dim = g->dimension();
  const RadialField reference =
      RadialField::sample(g, [](double r) { return cplx(std::exp(-r * r)); });
  const std::vector<cplx> coeff = forward(reference);

  const RadialField back = backward(coeff);
  round_trip_error_ = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i)
    round_trip_error_ =
        std::max(round_trip_error_, std::abs(back.values[i] - reference.values[i]));

  horizon_ = 0.0;
  if (round_trip_error_ > options.horizon_tolerance) return;
  std::vector<cplx> work(coeff.size());
  for (int step = 0;; ++step) {
    const double t = std::ldexp(std::pow(2.0, 0.25 * step), -4);
    if (t > options.horizon_cap) break;
    const std::vector<cplx> phases = free_phases(t);
    for (std::size_t j = 0; j < coeff.size(); ++j) work[j] = coeff[j] * phases[j];
    const RadialField evolved = backward(work);
    double err = 0.0;
    for (std::size_t i = 0; i < evolved.size(); ++i)
      err = std::max(err, std::abs(evolved.values[i] -
                                   gaussian_free_solution(g->nodes()[i], t, dim)));
    if (err > options.horizon_tolerance) break;
    horizon_ = t;
  }
}

std::vector<cplx> SpectralTransform::forward(const RadialField& u) const {
  if (u.grid != grid_ && !(*u.grid == *grid_))
    throw Error(ErrorCode::invalid_input, "field lives on a different grid");
  const std::size_t n = size();
  std::vector<cplx> x(n);
  const auto sw = grid_->sqrt_weights();
  for (std::size_t i = 0; i < n; ++i) x[i] = sw[i] * u.values[i];
  std::vector<cplx> c(n);
  kernels::parallel::matvec(basis_t_, n, n, x, c);
  return c;
}

RadialField SpectralTransform::backward(std::span<const cplx> coefficients) const {
  const std::size_t n = size();
  if (coefficients.size() != n)
    throw Error(ErrorCode::invalid_input, "coefficient vector has wrong length");
  std::vector<cplx> y(n);
  kernels::parallel::matvec(basis_, n, n, coefficients, y);
  const auto sw = grid_->sqrt_weights();
  for (std::size_t i = 0; i < n; ++i) y[i] /= sw[i];
  return RadialField(grid_, std::move(y));
}

RadialField SpectralTransform::apply_multiplier(
    const RadialField& u, std::span<const cplx> multiplier) const {
  std::vector<cplx> c = forward(u);
  kernels::parallel::pointwise_multiply(c, multiplier);
  return backward(c);
}

void SpectralTransform::propagate_in_place(std::vector<cplx>& values,
                                           std::span<const cplx> phases) const {
  const std::size_t n = size();
  const auto sw = grid_->sqrt_weights();
  std::vector<cplx> x(n), c(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = sw[i] * values[i];
  kernels::parallel::matvec(basis_t_, n, n, x, c);
  kernels::parallel::pointwise_multiply(c, phases);
  kernels::parallel::matvec(basis_, n, n, c, x);
  for (std::size_t i = 0; i < n; ++i) values[i] = x[i] / sw[i];
}

std::vector<cplx> SpectralTransform::free_phases(double t) const {
  std::vector<cplx> p(size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double theta = -t * frequencies_[j] * frequencies_[j];
    p[j] = cplx(std::cos(theta), std::sin(theta));
  }
  return p;
}

double SpectralTransform::gradient_norm_squared(const RadialField& u) const {
  const std::vector<cplx> c = forward(u);
  double s = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j)
    s += frequencies_[j] * frequencies_[j] * std::norm(c[j]);
  return s;
}

RadialField free_evolve(const SpectralTransform& transform, const RadialField& u,
                        double t) {
  if (!std::isfinite(t))
    throw Error(ErrorCode::invalid_input, "evolution time must be finite");
  if (t == 0.0) return u;
  if (std::abs(t) > transform.validated_horizon())
    throw Error(ErrorCode::outside_validated_range,
                "|t| = " + std::to_string(std::abs(t)) +
                    " exceeds the certified horizon " +
                    std::to_string(transform.validated_horizon()));
  RadialField out = u;
  transform.propagate_in_place(out.values, transform.free_phases(t));
  return out;
}

RadialField fractional_power(const SpectralTransform& transform,
                             const RadialField& u, double alpha) {
  const int n = transform.grid()->dimension();
  if (!(alpha > -n) || alpha > 2.0)
    throw Error(ErrorCode::invalid_input,
                "fractional exponent must lie in (-n, 2], got " +
                    std::to_string(alpha));
  if (alpha == 0.0) return u;
  std::vector<cplx> m(transform.size());
  for (std::size_t j = 0; j < m.size(); ++j)
    m[j] = std::pow(transform.frequencies()[j], alpha);
  return transform.apply_multiplier(u, m);
}

DispersiveFit dispersive_decay_fit(const SpectralTransform& transform,
                                   const RadialField& u,
                                   std::span<const double> times) {
  if (times.size() < 3)
    throw Error(ErrorCode::insufficient_data,
                "dispersive fit needs at least 3 sample times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0))
      throw Error(ErrorCode::invalid_input, "sample times must be positive");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw Error(ErrorCode::invalid_input, "sample times must increase");
  }
  const int n = transform.grid()->dimension();
  const double l1 = lp_norm(u, 1.0);
  if (!(l1 > 0.0))
    throw Error(ErrorCode::invalid_input, "dispersive fit needs nonzero data");

  DispersiveFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double t : times) {
    const double sup = lp_norm(free_evolve(transform, u, t), INFINITY);
    fit.sup_norms.push_back(sup);
    fit.empirical_constant =
        std::max(fit.empirical_constant, sup * std::pow(t, 0.5 * n) / l1);
    const double x = std::log(t);
    const double y = std::log(sup);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(times.size());
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / m;
  return fit;
}

}  // namespace nlslab
