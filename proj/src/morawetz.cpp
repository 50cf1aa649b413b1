#include "nlslab/morawetz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "nlslab/error.hpp"

namespace nlslab {

namespace {

// Order of the polynomial smoothstep: S is 0 -> 1 on [0,1] with its first
// smoothstep_order derivatives vanishing at both ends.
constexpr int smoothstep_order = 8;
constexpr int smoothstep_degree = 2 * smoothstep_order + 1;

// S(x) = x^{m+1} sum_{k=0}^{m} C(m+k,k) C(2m+1,m-k) (-x)^k, m = smoothstep_order.
std::array<double, smoothstep_degree + 1> smoothstep_coefficients() {
  const auto binom = [](int a, int b) {
    double c = 1.0;
    for (int i = 1; i <= b; ++i) c = c * (a - b + i) / i;
    return c;
  };
  constexpr int m = smoothstep_order;
  std::array<double, smoothstep_degree + 1> c{};
  for (int k = 0; k <= m; ++k)
    c[static_cast<std::size_t>(m + 1 + k)] =
        (k % 2 ? -1.0 : 1.0) * binom(m + k, k) * binom(2 * m + 1, m - k);
  return c;
}

// k-th derivative of S at x by Horner on sum_p c_p p!/(p-k)! x^{p-k}.
// For x > 1/2 the symmetry S(x) = 1 - S(1 - x) avoids the cancellation of
// the large alternating coefficients near x = 1.
double smoothstep_derivative(double x, int k) {
  if (x > 0.5) {
    const double mirrored = smoothstep_derivative(1.0 - x, k);
    if (k == 0) return 1.0 - mirrored;
    return k % 2 ? mirrored : -mirrored;
  }
  static const auto coeff = smoothstep_coefficients();
  double sum = 0.0;
  for (int p = smoothstep_degree; p >= k; --p) {
    double falling = 1.0;
    for (int j = 0; j < k; ++j) falling *= p - j;
    sum = sum * x + coeff[static_cast<std::size_t>(p)] * falling;
  }
  return sum;
}

// k-th derivative of the cutoff: 1 on [0,1], 0 on [2,inf).
double cutoff_derivative(double r, int k) {
  if (r <= 1.0) return k == 0 ? 1.0 : 0.0;
  if (r >= 2.0) return 0.0;
  const double v = smoothstep_derivative(r - 1.0, k);
  return k == 0 ? 1.0 - v : -v;
}

// d/dt of f at interior sample k. Fourth-order five-point stencils (centred,
// or shifted by one next to the ends) on uniformly spaced windows, three-point
// central otherwise.
double time_derivative(const std::vector<double>& t, const std::vector<double>& f,
                       std::size_t k) {
  static constexpr double stencils[3][5] = {
      {-3, -10, 18, -6, 1}, {1, -8, 0, 8, -1}, {-1, 6, -18, 10, 3}};
  const double central = (f[k + 1] - f[k - 1]) / (t[k + 1] - t[k - 1]);
  if (t.size() < 5) return central;
  const std::size_t start = std::clamp(k, std::size_t{2}, t.size() - 3) - 2;
  const double h = t[start + 1] - t[start];
  for (std::size_t i = start; i < start + 4; ++i)
    if (std::abs((t[i + 1] - t[i]) - h) > 1e-9 * h) return central;
  const double* w = stencils[k - start - 1];
  double d = 0.0;
  for (std::size_t i = 0; i < 5; ++i) d += w[i] * f[start + i];
  return d / (12.0 * h);
}

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw Error(ErrorCode::invalid_input, "Morawetz eps must be positive");
}

}  // namespace

WeightJet morawetz_weight_eval(int n, double eps, double r) {
  check_eps(eps);
  if (n < 3) throw Error(ErrorCode::invalid_input, "dimension must be >= 3");
  if (!(r >= 0.0)) throw Error(ErrorCode::invalid_input, "radius must be >= 0");
  if (r > 1.0)
    throw Error(ErrorCode::outside_validated_range,
                "closed forms hold only for |x| <= 1");
  const double e2 = eps * eps;
  const double s = std::sqrt(e2 + r * r);
  const double s3 = s * s * s;
  const double s5 = s3 * s * s;
  const double s7 = s5 * s * s;
  WeightJet j;
  j.a = s;
  j.d1 = r / s;
  j.d2 = e2 / s3;
  j.laplacian = (n - 1) / s + e2 / s3;
  j.neg_bilaplacian =
      (n - 1.0) * (n - 3.0) / s3 + 6.0 * (n - 3.0) * e2 / s5 + 15.0 * e2 * e2 / s7;
  return j;
}

MorawetzWeight::MorawetzWeight(int n, double eps) : n_(n), eps_(eps) {
  check_eps(eps);
  if (n < 3) throw Error(ErrorCode::invalid_input, "dimension must be >= 3");
}

WeightJet MorawetzWeight::operator()(double r) const {
  if (r <= 1.0) return morawetz_weight_eval(n_, eps_, r);
  if (r >= 2.0) return {};
  const double e2 = eps_ * eps_;
  const double s = std::sqrt(e2 + r * r);
  const double s3 = s * s * s;
  const double s5 = s3 * s * s;
  const double s7 = s5 * s * s;
  const std::array<double, 5> sd = {s, r / s, e2 / s3, -3.0 * e2 * r / s5,
                                    -3.0 * e2 * (s * s - 5.0 * r * r) / s7};
  std::array<double, 5> cd{};
  for (int k = 0; k < 5; ++k) cd[static_cast<std::size_t>(k)] = cutoff_derivative(r, k);
  static constexpr int binom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  std::array<double, 5> ad{};
  for (int k = 0; k < 5; ++k)
    for (int j = 0; j <= k; ++j)
      ad[static_cast<std::size_t>(k)] += binom[k][j] * sd[static_cast<std::size_t>(j)] *
                                         cd[static_cast<std::size_t>(k - j)];

  const double m = n_ - 1.0;
  const double r2 = r * r;
  const double r3 = r2 * r;
  const double b1 = ad[3] + m * (ad[2] / r - ad[1] / r2);
  const double b2 = ad[4] + m * (ad[3] / r - 2.0 * ad[2] / r2 + 2.0 * ad[1] / r3);
  WeightJet j;
  j.a = ad[0];
  j.d1 = ad[1];
  j.d2 = ad[2];
  j.laplacian = ad[2] + m * ad[1] / r;
  j.neg_bilaplacian = -(b2 + m * b1 / r);
  return j;
}

MomentumFluxReport momentum_flux_identity_check(const Trajectory& traj,
                                                double eps,
                                                bool include_nonlinear) {
  if (traj.size() < 3)
    throw Error(ErrorCode::insufficient_data, "momentum identity needs 3 snapshots");
  const RadialGrid& g = *traj.grid;
  const int n = g.dimension();
  const MorawetzWeight weight(n, eps);
  std::vector<WeightJet> jets;
  jets.reserve(g.size());
  for (double r : g.nodes()) jets.push_back(weight(r));
  const auto w = g.weights();
  const double pot = critical_exponent(n);
  const double mu = include_nonlinear ? traj.config.mu : 0.0;

  std::vector<double> momentum(traj.size());
  MomentumFluxReport rep;
  rep.eps = eps;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const RadialField& u = traj.snapshots[k];
    const std::vector<cplx> ur = radial_derivative(u);
    double mom = 0.0, conv = 0.0, bil = 0.0, nl = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const WeightJet& j = jets[i];
      if (j.d1 == 0.0 && j.neg_bilaplacian == 0.0 && j.laplacian == 0.0) continue;
      mom += w[i] * j.d1 * (ur[i] * std::conj(u.values[i])).imag();
      conv += w[i] * j.d2 * std::norm(ur[i]);
      bil += w[i] * j.neg_bilaplacian * std::norm(u.values[i]);
      if (mu != 0.0) nl += w[i] * j.laplacian * std::pow(std::abs(u.values[i]), pot);
    }
    momentum[k] = mom;
    if (k == 0 || k + 1 == traj.size()) continue;
    rep.times.push_back(traj.times[k]);
    rep.convexity.push_back(2.0 * conv);
    rep.bilaplacian.push_back(0.5 * bil);
    rep.nonlinear.push_back(mu * 2.0 / n * nl);
  }
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const double lhs = time_derivative(traj.times, momentum, k);
    rep.lhs.push_back(lhs);
    const std::size_t i = k - 1;
    const double rhs = rep.convexity[i] + rep.bilaplacian[i] + rep.nonlinear[i];
    rep.max_defect = std::max(rep.max_defect, std::abs(lhs - rhs));
    for (double v : {lhs, rep.convexity[i], rep.bilaplacian[i], rep.nonlinear[i]})
      rep.scale = std::max(rep.scale, std::abs(v));
  }
  rep.normalized = rep.scale > 0.0 ? rep.max_defect / rep.scale : 0.0;
  return rep;
}

MorawetzReport morawetz_check(const SpectralTransform& transform,
                              const Trajectory& traj, TimeInterval interval,
                              double a_factor, std::pair<double, double> eps_pair) {
  if (!(a_factor >= 1.0))
    throw Error(ErrorCode::invalid_input, "Morawetz A must be >= 1");
  check_eps(eps_pair.first);
  check_eps(eps_pair.second);
  if (eps_pair.first == eps_pair.second)
    throw Error(ErrorCode::invalid_input, "Richardson needs two distinct eps");
  const std::size_t i0 = traj.index_of(interval.begin);
  const std::size_t i1 = traj.index_of(interval.end);
  if (i1 <= i0) throw Error(ErrorCode::invalid_input, "empty time interval");

  const RadialGrid& g = *traj.grid;
  const int n = g.dimension();
  const double pot = critical_exponent(n);
  const double h = g.spacing();
  MorawetzReport rep;
  rep.interval = {traj.times[i0], traj.times[i1]};
  rep.a_factor = a_factor;
  rep.radius = a_factor * std::sqrt(rep.interval.length());
  rep.eps = {eps_pair.first, eps_pair.second};

  // Fraction of each cell [r_i - h/2, r_i + h/2] inside the ball.
  std::vector<double> inside(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    inside[i] = std::clamp((rep.radius - (g.nodes()[i] - 0.5 * h)) / h, 0.0, 1.0);

  const auto spacetime = [&](double eps) {
    std::vector<double> kernel(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.nodes()[i];
      kernel[i] = inside[i] / std::sqrt(eps * eps + r * r);
    }
    double total = 0.0;
    double prev = 0.0;
    for (std::size_t k = i0; k <= i1; ++k) {
      const RadialField& u = traj.snapshots[k];
      std::vector<double> f(g.size());
      for (std::size_t i = 0; i < g.size(); ++i)
        f[i] = kernel[i] * std::pow(std::abs(u.values[i]), pot);
      const double cur = integrate(g, f);
      if (k > i0) total += 0.5 * (traj.times[k] - traj.times[k - 1]) * (prev + cur);
      prev = cur;
    }
    return total;
  };

  for (double e : rep.eps) rep.lhs_eps.push_back(spacetime(e));
  rep.lhs_direct = spacetime(0.0);
  const double e1 = rep.eps[0] * rep.eps[0];
  const double e2 = rep.eps[1] * rep.eps[1];
  rep.lhs_extrapolated =
      rep.lhs_eps[1] + (rep.lhs_eps[1] - rep.lhs_eps[0]) * e2 / (e1 - e2);
  rep.energy = energy(transform, traj.snapshots[i0], traj.config.mu).total;
  const double denom = a_factor * std::sqrt(rep.interval.length()) * rep.energy;
  if (denom > 0.0)
    rep.ratio = rep.lhs_extrapolated / denom;
  else if (rep.lhs_extrapolated != 0.0)
    throw Error(ErrorCode::hypothesis_violated,
                "Morawetz ratio needs positive energy");
  return rep;
}

}  // namespace nlslab
