#include "nlslab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "nlslab/error.hpp"

namespace nlslab {

EnergyParts energy(const SpectralTransform& transform, const RadialField& u,
                   double mu) {
  EnergyParts e;
  e.kinetic = 0.5 * transform.gradient_norm_squared(u);
  if (mu != 0.0) {
    const int n = u.grid->dimension();
    e.potential = mu * (n - 2.0) / (2.0 * n) *
                  abs_pow_integral(u, critical_exponent(n));
  }
  e.total = e.kinetic + e.potential;
  return e;
}

double QuinticBump::value(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  const double x = 2.0 * (s - 0.5);
  return 1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double QuinticBump::derivative(double s) {
  if (s <= 0.5 || s >= 1.0) return 0.0;
  const double x = 2.0 * (s - 0.5);
  return -2.0 * 30.0 * x * x * (1.0 - x) * (1.0 - x);
}

double QuinticBump::max_slope() { return 15.0 / 4.0; }

double local_mass(const RadialField& u, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw Error(ErrorCode::invalid_input, "local mass radius must be positive");
  const auto r = u.grid->nodes();
  std::vector<double> f(u.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double chi = QuinticBump::value(r[i] / radius);
    f[i] = chi * chi * std::norm(u.values[i]);
  }
  return std::sqrt(integrate(*u.grid, f));
}

double mass_flux_constant() {
  return 2.0 * std::numbers::sqrt2 * QuinticBump::max_slope();
}

MassFluxReport mass_flux_check(const SpectralTransform& transform,
                               const Trajectory& traj, double radius) {
  if (traj.size() < 3)
    throw Error(ErrorCode::insufficient_data, "mass flux needs 3 snapshots");
  MassFluxReport rep;
  rep.radius = radius;
  std::vector<double> mass(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    mass[i] = local_mass(traj.snapshots[i], radius);
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    const double rate =
        (mass[i + 1] - mass[i - 1]) / (traj.times[i + 1] - traj.times[i - 1]);
    rep.max_rate = std::max(rep.max_rate, std::abs(rate));
  }
  const double mu = traj.config.mu;
  if (mu >= 0.0) {
    rep.energy_scale = energy(transform, traj.snapshots.front(), mu).total;
  } else {
    for (const auto& u : traj.snapshots)
      rep.energy_scale =
          std::max(rep.energy_scale, 0.5 * transform.gradient_norm_squared(u));
  }
  rep.bound = mass_flux_constant() * std::sqrt(std::max(rep.energy_scale, 0.0)) /
              radius;
  if (rep.bound > 0.0)
    rep.ratio = rep.max_rate / rep.bound;
  else
    rep.ratio = rep.max_rate == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return rep;
}

double hardy_ratio(const SpectralTransform& transform, const RadialField& u,
                   double mu, double radius) {
  const double m = local_mass(u, radius);
  if (m == 0.0) return 0.0;
  const double e = energy(transform, u, mu).total;
  if (!(e > 0.0))
    throw Error(ErrorCode::hypothesis_violated,
                "Hardy ratio needs positive energy, got " + std::to_string(e));
  return m / (std::sqrt(e) * radius);
}

namespace {

void check_exponent(double p, const char* name) {
  if (!(p >= 1.0))
    throw Error(ErrorCode::invalid_input, std::string(name) + " must be >= 1");
}

double time_norm(std::span<const double> times,
                 const std::vector<const RadialField*>& fields, double q, double r) {
  std::vector<double> space(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) space[i] = lp_norm(*fields[i], r);
  if (std::isinf(q)) return *std::max_element(space.begin(), space.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < space.size(); ++i)
    s += 0.5 * (times[i + 1] - times[i]) *
         (std::pow(space[i], q) + std::pow(space[i + 1], q));
  return std::pow(s, 1.0 / q);
}

std::pair<std::size_t, std::size_t> interval_indices(const Trajectory& traj,
                                                     TimeInterval interval) {
  const std::size_t i0 = traj.index_of(interval.begin);
  const std::size_t i1 = traj.index_of(interval.end);
  if (i1 <= i0)
    throw Error(ErrorCode::invalid_input, "empty time interval");
  return {i0, i1};
}

}  // namespace

double spacetime_norm(const Trajectory& traj, double q, double r,
                      TimeInterval interval) {
  check_exponent(q, "q");
  check_exponent(r, "r");
  const auto [i0, i1] = interval_indices(traj, interval);
  std::vector<const RadialField*> fields;
  for (std::size_t i = i0; i <= i1; ++i) fields.push_back(&traj.snapshots[i]);
  return time_norm(std::span(traj.times).subspan(i0, i1 - i0 + 1), fields, q, r);
}

double AdmissiblePair::q() const {
  if (inv_q.numerator() == 0) return std::numeric_limits<double>::infinity();
  return boost::rational_cast<double>(1 / inv_q);
}

double AdmissiblePair::r() const {
  if (inv_r.numerator() == 0) return std::numeric_limits<double>::infinity();
  return boost::rational_cast<double>(1 / inv_r);
}

bool is_admissible(const AdmissiblePair& pair, int n) {
  using R = boost::rational<long long>;
  const R half(1, 2);
  if (pair.inv_q.numerator() < 0 || pair.inv_q > half || pair.inv_r.numerator() < 0 || pair.inv_r > half)
    return false;
  return pair.inv_q + R(n, 2) * pair.inv_r == R(n, 4);
}

bool is_admissible(double q, double r, int n) {
  if (std::isnan(q) || std::isnan(r) || q < 2.0 || r < 2.0) return false;
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  const double ir = std::isinf(r) ? 0.0 : 1.0 / r;
  return std::abs(iq + 0.5 * n * ir - 0.25 * n) <= 1e-12;
}

std::vector<AdmissiblePair> default_admissible_pairs(int n) {
  using R = boost::rational<long long>;
  const long long nn = n;
  return {
      {R(0), R(1, 2)},
      {R(nn, 2 * (nn + 2)), R(nn, 2 * (nn + 2))},
      {R(nn - 2, 2 * (nn + 2)), R(nn * nn + 4, 2 * nn * (nn + 2))},
      {R(1, 2), R(nn - 2, 2 * nn)},
  };
}

StrichartzReport strichartz_norm(const SpectralTransform& transform,
                                 const Trajectory& traj, TimeInterval interval,
                                 int order,
                                 const std::vector<AdmissiblePair>& pairs) {
  if (order != 0 && order != 1)
    throw Error(ErrorCode::invalid_input, "Strichartz order must be 0 or 1");
  const int n = traj.grid->dimension();
  for (const auto& p : pairs)
    if (!is_admissible(p, n))
      throw Error(ErrorCode::config, "exponent pair is not admissible");
  const auto [i0, i1] = interval_indices(traj, interval);

  std::vector<RadialField> derived;
  std::vector<const RadialField*> fields;
  if (order == 1) {
    derived.reserve(i1 - i0 + 1);
    for (std::size_t i = i0; i <= i1; ++i)
      derived.push_back(fractional_power(transform, traj.snapshots[i], 1.0));
    for (const auto& f : derived) fields.push_back(&f);
  } else {
    for (std::size_t i = i0; i <= i1; ++i) fields.push_back(&traj.snapshots[i]);
  }
  const auto times = std::span(traj.times).subspan(i0, i1 - i0 + 1);

  StrichartzReport rep;
  rep.order = order;
  for (const auto& p : pairs) {
    const double v = time_norm(times, fields, p.q(), p.r());
    rep.entries.push_back({p, v});
    rep.norm = std::max(rep.norm, v);
  }
  return rep;
}

}  // namespace nlslab
