#include "nlslab/radial_domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/special_functions/bernoulli.hpp>

#include "nlslab/error.hpp"
#include "nlslab/kernels.hpp"

namespace nlslab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::grid_too_coarse: return "grid_too_coarse";
    case ErrorCode::outside_validated_range: return "outside_validated_range";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::resolution: return "resolution";
    case ErrorCode::hypothesis_violated: return "hypothesis_violated";
    case ErrorCode::not_a_snapshot_time: return "not_a_snapshot_time";
    case ErrorCode::io: return "io";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

namespace {

// Nodes next to the origin that receive a moment correction in even n.
constexpr std::size_t origin_correction_nodes = 6;

// zeta(-m, 1/2) for odd m, the regularised midpoint-rule defect of r^m on
// [0, inf) with unit spacing.
double half_zeta_negative(int m) {
  const double bernoulli = boost::math::bernoulli_b2n<double>((m + 1) / 2);
  return (1.0 - std::ldexp(1.0, -m)) * bernoulli / (m + 1);
}

// For even n the integrand r^{n-1} g(r^2) is odd at the origin and the
// midpoint rule loses its spectral accuracy (error ~ h^n). The first few
// weights are adjusted so that r^{n-1+2j}, j < p, carry no defect, which
// pushes the error to h^{n+2p}. Returns the corrections in units of h^n.
std::vector<double> origin_corrections(int dimension) {
  const int s = dimension - 1;
  const auto p = static_cast<Eigen::Index>(origin_correction_nodes);
  Eigen::MatrixXd a(p, p);
  Eigen::VectorXd b(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i)
      a(j, i) = std::pow(static_cast<double>(i) + 0.5, 2.0 * static_cast<double>(j));
    b(j) = -half_zeta_negative(s + 2 * static_cast<int>(j));
  }
  const Eigen::VectorXd d = a.fullPivLu().solve(b);
  return {d.data(), d.data() + p};
}

}  // namespace

RadialGrid::RadialGrid(int dimension, std::size_t node_count, double r_max)
    : dimension_(dimension), r_max_(r_max) {
  if (dimension < 3)
    throw Error(ErrorCode::invalid_input,
                "dimension must be >= 3, got " + std::to_string(dimension));
  if (node_count < 3)
    throw Error(ErrorCode::grid_too_coarse, "grid needs at least 3 nodes");
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw Error(ErrorCode::invalid_input, "r_max must be positive and finite");

  spacing_ = r_max / static_cast<double>(node_count);
  const double half_n = 0.5 * dimension;
  sphere_area_ = 2.0 * std::pow(std::numbers::pi, half_n) / std::tgamma(half_n);

  nodes_.resize(node_count);
  weights_.resize(node_count);
  sqrt_weights_.resize(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    const double r = (static_cast<double>(i) + 0.5) * spacing_;
    nodes_[i] = r;
    weights_[i] = sphere_area_ * std::pow(r, dimension - 1) * spacing_;
  }
  if (dimension % 2 == 0 && node_count >= 2 * origin_correction_nodes) {
    const std::vector<double> d = origin_corrections(dimension);
    const double scale = sphere_area_ * std::pow(spacing_, dimension);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double corrected = weights_[i] + scale * d[i];
      if (corrected > 0.0) weights_[i] = corrected;
    }
  }
  for (std::size_t i = 0; i < node_count; ++i)
    sqrt_weights_[i] = std::sqrt(weights_[i]);
}

GridPtr make_grid(int dimension, std::size_t node_count, double r_max) {
  return std::make_shared<const RadialGrid>(dimension, node_count, r_max);
}

RadialField::RadialField(GridPtr g, std::vector<cplx> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw Error(ErrorCode::invalid_input, "field without grid");
  if (values.size() != grid->size())
    throw Error(ErrorCode::invalid_input,
                "field has " + std::to_string(values.size()) +
                    " samples, grid has " + std::to_string(grid->size()));
}

RadialField RadialField::zeros(GridPtr g) {
  if (!g) throw Error(ErrorCode::invalid_input, "field without grid");
  const std::size_t n = g->size();
  return RadialField(std::move(g), std::vector<cplx>(n));
}

RadialField RadialField::sample(GridPtr g,
                                const std::function<cplx(double)>& f) {
  if (!g) throw Error(ErrorCode::invalid_input, "field without grid");
  std::vector<cplx> v;
  v.reserve(g->size());
  for (double r : g->nodes()) v.push_back(f(r));
  return RadialField(std::move(g), std::move(v));
}

std::vector<double> RadialField::abs() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::abs(values[i]);
  return out;
}

double nonlinearity_power(int n) { return 4.0 / (n - 2); }
double critical_exponent(int n) { return 2.0 * n / (n - 2); }
double spacetime_exponent(int n) { return 2.0 * (n + 2) / (n - 2); }

double integrate(const RadialGrid& grid, std::span<const double> f) {
  if (f.size() != grid.size())
    throw Error(ErrorCode::invalid_input, "integrand length does not match grid");
  for (double v : f)
    if (!std::isfinite(v))
      throw Error(ErrorCode::invalid_input, "non-finite integrand sample");
  return kernels::parallel::weighted_sum(grid.weights(), f);
}

double lp_norm(const RadialField& u, double p) {
  if (!(p >= 1.0))
    throw Error(ErrorCode::invalid_input, "L^p exponent must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : u.values) m = std::max(m, std::abs(v));
    return m;
  }
  return std::pow(abs_pow_integral(u, p), 1.0 / p);
}

double abs_pow_integral(const RadialField& u, double p) {
  for (const auto& v : u.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::invalid_input, "non-finite field sample");
  return kernels::parallel::weighted_abs_pow_sum(u.grid->weights(), u.values, p);
}

RadialField radial_laplacian(const RadialField& u) {
  const RadialGrid& g = *u.grid;
  const std::size_t n = g.size();
  if (n < 3) throw Error(ErrorCode::grid_too_coarse, "Laplacian needs 3 nodes");
  const double h = g.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double dim_m1 = g.dimension() - 1;
  const auto& v = u.values;
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx left = i == 0 ? v[0] : v[i - 1];
    const cplx right = i + 1 == n ? cplx{} : v[i + 1];
    const cplx urr = (right - 2.0 * v[i] + left) * inv_h2;
    const cplx ur = (right - left) / (2.0 * h);
    out[i] = urr + dim_m1 / g.nodes()[i] * ur;
  }
  return RadialField(u.grid, std::move(out));
}

std::vector<cplx> radial_derivative(const RadialField& u) {
  static constexpr double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0,
                                  -1.0 / 280.0};
  const std::size_t n = u.size();
  if (n < 9)
    throw Error(ErrorCode::grid_too_coarse, "derivative stencil needs 9 nodes");
  const auto& v = u.values;
  const auto at = [&](std::ptrdiff_t j) -> cplx {
    if (j < 0) return v[static_cast<std::size_t>(-1 - j)];
    if (j >= static_cast<std::ptrdiff_t>(n)) return {};
    return v[static_cast<std::size_t>(j)];
  };
  const double inv_h = 1.0 / u.grid->spacing();
  std::vector<cplx> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<std::ptrdiff_t>(i);
    cplx s{};
    for (int k = 1; k <= 4; ++k) s += c[k - 1] * (at(ii + k) - at(ii - k));
    d[i] = s * inv_h;
  }
  return d;
}

double boundary_decay_ratio(const RadialField& u) {
  double peak = 0.0;
  for (const auto& v : u.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  return std::abs(u.values.back()) / peak;
}

namespace {

// Cubic B-spline through the even extension of one real channel, padded by a
// zero on each side so that the spline vanishes past the last node.
class EvenSpline {
 public:
  EvenSpline(const std::vector<double>& samples, double h) {
    const std::size_t n = samples.size();
    std::vector<double> ext;
    ext.reserve(2 * n + 2);
    ext.push_back(0.0);
    for (std::size_t i = n; i-- > 0;) ext.push_back(samples[i]);
    for (std::size_t i = 0; i < n; ++i) ext.push_back(samples[i]);
    ext.push_back(0.0);
    reach_ = (static_cast<double>(n) + 0.5) * h;
    spline_.emplace(ext.data(), ext.size(), -reach_, h, 0.0, 0.0);
  }

  double operator()(double r) const {
    if (r >= reach_) return 0.0;
    return (*spline_)(r);
  }

 private:
  double reach_ = 0.0;
  std::optional<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
};

}  // namespace

RescaleResult rescale(const RadialField& u, double lambda,
                      double decay_threshold) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::invalid_input, "rescale factor must be positive");
  const RadialGrid& g = *u.grid;
  RescaleResult result;
  if (lambda == 1.0) {
    result.field = u;
    return result;
  }

  std::vector<double> re(u.size()), im(u.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    re[i] = u.values[i].real();
    im[i] = u.values[i].imag();
    peak = std::max(peak, std::abs(u.values[i]));
  }

  if (lambda > 1.0 && peak > 0.0) {
    const double cut = g.r_max() / lambda;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (g.nodes()[i] > cut && std::abs(u.values[i]) > decay_threshold * peak) {
        result.truncated = true;
        break;
      }
  }

  const EvenSpline sre(re, g.spacing());
  const EvenSpline sim(im, g.spacing());
  const double amp = std::pow(lambda, -0.5 * (g.dimension() - 2));
  std::vector<cplx> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double s = g.nodes()[i] / lambda;
    out[i] = amp * cplx(sre(s), sim(s));
  }
  result.field = RadialField(u.grid, std::move(out));
  return result;
}

}  // namespace nlslab
