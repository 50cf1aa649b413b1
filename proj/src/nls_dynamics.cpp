#include "nlslab/nls_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlslab/error.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/kernels.hpp"

namespace nlslab {

void EvolutionConfig::validate() const {
  if (dimension < 3)
    throw Error(ErrorCode::config, "dimension must be >= 3");
  if (!(mu == 1.0 || mu == -1.0 || mu == 0.0))
    throw Error(ErrorCode::config, "mu must be +1, -1 or 0");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error(ErrorCode::config, "dt must be positive");
  if (snapshot_stride == 0)
    throw Error(ErrorCode::config, "snapshot_stride must be >= 1");
  if (!(energy_drift_alarm > 0.0))
    throw Error(ErrorCode::config, "energy_drift_alarm must be positive");
  if (!(blowup_gradient_factor > 0.0))
    throw Error(ErrorCode::config, "blowup_gradient_factor must be positive");
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::complete: return "complete";
    case RunStatus::blowup: return "blowup";
    case RunStatus::energy_alarm: return "energy_alarm";
  }
  return "unknown";
}

std::size_t Trajectory::index_of(double t) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  const auto it = std::lower_bound(times.begin(), times.end(), t - tol);
  if (it != times.end() && std::abs(*it - t) <= tol)
    return static_cast<std::size_t>(it - times.begin());
  throw Error(ErrorCode::not_a_snapshot_time,
              "t = " + std::to_string(t) + " is not a snapshot time");
}

RadialField nonlinear_phase_step(const RadialField& u, double mu, double tau) {
  if (!std::isfinite(tau))
    throw Error(ErrorCode::invalid_input, "phase step length must be finite");
  for (const auto& v : u.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::invalid_input, "non-finite field sample");
  RadialField out = u;
  if (mu * tau == 0.0) return out;
  kernels::parallel::phase_rotate(out.values, mu * tau,
                                  nonlinearity_power(u.grid->dimension()));
  return out;
}

namespace {

bool all_finite(const std::vector<cplx>& v) {
  return std::all_of(v.begin(), v.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

void require_same_grid(const SpectralTransform& transform, const GridPtr& grid) {
  if (grid != transform.grid() && !(*grid == *transform.grid()))
    throw Error(ErrorCode::invalid_input, "trajectory and transform grids differ");
}

}  // namespace

Trajectory evolve(const SpectralTransform& transform, const RadialField& u0,
                  double t_minus, double t_plus, const EvolutionConfig& cfg) {
  cfg.validate();
  require_same_grid(transform, u0.grid);
  if (cfg.dimension != u0.grid->dimension())
    throw Error(ErrorCode::config, "config dimension differs from grid dimension");
  if (!(t_plus > t_minus))
    throw Error(ErrorCode::config, "time span must be nonempty");
  const double span = t_plus - t_minus;
  const double steps_real = std::round(span / cfg.dt);
  if (steps_real < 1.0 || std::abs(steps_real * cfg.dt - span) > 1e-9 * span)
    throw Error(ErrorCode::config, "dt must divide the time span");
  if (span > transform.validated_horizon())
    throw Error(ErrorCode::outside_validated_range,
                "time span " + std::to_string(span) +
                    " exceeds the certified horizon " +
                    std::to_string(transform.validated_horizon()));
  if (!all_finite(u0.values))
    throw Error(ErrorCode::invalid_input, "non-finite initial data");

  const auto steps = static_cast<std::size_t>(steps_real);
  const double p = nonlinearity_power(cfg.dimension);
  const double half = 0.5 * cfg.dt * cfg.mu;
  const std::vector<cplx> phases = transform.free_phases(cfg.dt);

  Trajectory traj;
  traj.config = cfg;
  traj.grid = u0.grid;
  traj.times.push_back(t_minus);
  traj.snapshots.push_back(u0);

  const EnergyParts e0 = energy(transform, u0, cfg.mu);
  const double grad0 = std::sqrt(2.0 * e0.kinetic);
  const double energy_scale = e0.kinetic + std::abs(e0.potential);

  std::vector<cplx> u = u0.values;
  for (std::size_t step = 1; step <= steps; ++step) {
    if (half != 0.0) kernels::parallel::phase_rotate(u, half, p);
    transform.propagate_in_place(u, phases);
    if (half != 0.0) kernels::parallel::phase_rotate(u, half, p);

    // Focusing runs are monitored after every step so a collapse is caught
    // before it passes unresolved between two snapshots.
    const bool snapshot = step % cfg.snapshot_stride == 0 || step == steps;
    if (!snapshot && cfg.mu >= 0.0) continue;
    const double t = t_minus + static_cast<double>(step) * cfg.dt;
    if (!all_finite(u)) {
      traj.status = RunStatus::energy_alarm;
      traj.status_detail = "non-finite state at t = " + std::to_string(t);
      break;
    }
    RadialField state(u0.grid, u);
    const EnergyParts e = energy(transform, state, cfg.mu);
    const double grad = std::sqrt(2.0 * e.kinetic);
    const double drift =
        energy_scale > 0.0 ? std::abs(e.total - e0.total) / energy_scale : 0.0;
    if (grad0 > 0.0 && grad > cfg.blowup_gradient_factor * grad0) {
      traj.status = RunStatus::blowup;
      traj.status_detail = "gradient norm grew by " + std::to_string(grad / grad0) +
                           " at t = " + std::to_string(t);
    } else if (drift > cfg.energy_drift_alarm) {
      traj.status = RunStatus::energy_alarm;
      traj.status_detail = "relative energy drift " + std::to_string(drift) +
                           " at t = " + std::to_string(t);
    }
    if (snapshot || traj.status != RunStatus::complete) {
      traj.times.push_back(t);
      traj.snapshots.push_back(std::move(state));
    }
    if (traj.status != RunStatus::complete) break;
  }
  return traj;
}

double duhamel_residual(const SpectralTransform& transform,
                        const Trajectory& traj, double t0, double t) {
  require_same_grid(transform, traj.grid);
  const std::size_t i0 = traj.index_of(t0);
  const std::size_t i1 = traj.index_of(t);
  if (std::abs(traj.times[i1] - traj.times[i0]) > transform.validated_horizon())
    throw Error(ErrorCode::outside_validated_range,
                "Duhamel span exceeds the certified horizon");
  const double tt = traj.times[i1];
  const double mu = traj.config.mu;
  const double p = nonlinearity_power(traj.grid->dimension());
  const auto& k = transform.frequencies();

  const auto propagator = [&](double s, std::size_t j) {
    const double theta = -(tt - s) * k[j] * k[j];
    return cplx(std::cos(theta), std::sin(theta));
  };

  std::vector<cplx> c = transform.forward(traj.snapshots[i0]);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] *= propagator(traj.times[i0], j);

  if (mu != 0.0 && i0 != i1) {
    const std::ptrdiff_t dir = i1 > i0 ? 1 : -1;
    std::vector<cplx> integral(c.size());
    for (auto i = static_cast<std::ptrdiff_t>(i0);; i += dir) {
      const auto ui = static_cast<std::size_t>(i);
      const double s = traj.times[ui];
      double weight = 0.0;
      if (ui != i0) weight += 0.5 * (s - traj.times[ui - static_cast<std::size_t>(dir)]);
      if (ui != i1) weight += 0.5 * (traj.times[ui + static_cast<std::size_t>(dir)] - s);
      RadialField f = traj.snapshots[ui];
      for (auto& v : f.values) v *= mu * std::pow(std::abs(v), p);
      const std::vector<cplx> cf = transform.forward(f);
      for (std::size_t j = 0; j < cf.size(); ++j)
        integral[j] += weight * propagator(s, j) * cf[j];
      if (ui == i1) break;
    }
    const cplx minus_i(0.0, -1.0);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += minus_i * integral[j];
  }

  const RadialField duhamel = transform.backward(c);
  RadialField diff = traj.snapshots[i1];
  for (std::size_t i = 0; i < diff.size(); ++i) diff.values[i] -= duhamel.values[i];
  return lp_norm(diff, 2.0);
}

std::pair<RadialField, RadialField> linear_flows(
    const SpectralTransform& transform, const Trajectory& traj, double t) {
  require_same_grid(transform, traj.grid);
  const double ts = traj.times[traj.index_of(t)];
  return {free_evolve(transform, traj.snapshots.front(), ts - traj.t_minus()),
          free_evolve(transform, traj.snapshots.back(), ts - traj.t_plus())};
}

BlowupRecord blowup_monitor(const SpectralTransform& transform,
                            const Trajectory& traj) {
  require_same_grid(transform, traj.grid);
  BlowupRecord rec;
  if (traj.size() == 0) return rec;
  const EnergyParts e0 = energy(transform, traj.snapshots.front(), traj.config.mu);
  rec.glassey_indicator = traj.config.mu < 0.0 && std::abs(e0.potential) > e0.kinetic;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double g = std::sqrt(transform.gradient_norm_squared(traj.snapshots[i]));
    rec.gradient_norms.push_back(g);
    const double g0 = rec.gradient_norms.front();
    if (!rec.flagged && g0 > 0.0 &&
        g > traj.config.blowup_gradient_factor * g0) {
      rec.flagged = true;
      rec.alarm_time = traj.times[i];
    }
  }
  return rec;
}

}  // namespace nlslab
