#pragma once

// Strang-split evolution of i u_t + Delta u = mu |u|^{4/(n-2)} u and the
// trajectory-level consistency monitors built on it.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlslab/radial_domain.hpp"
#include "nlslab/spectral_transform.hpp"

namespace nlslab {

struct EvolutionConfig {
  int dimension = 3;
  /// +1 defocusing, -1 focusing, 0 free evolution.
  double mu = 1.0;
  double dt = 1e-3;
  std::size_t snapshot_stride = 10;
  /// Energy drift |E(t) - E(t_-)| / (kinetic + |potential|)(t_-) that aborts a run.
  double energy_drift_alarm = 1e-3;
  /// Blowup is flagged once ||grad u|| exceeds this multiple of its initial value.
  double blowup_gradient_factor = 10.0;

  /// Throws ErrorCode::config on the first violated field.
  void validate() const;
};

enum class RunStatus { complete, blowup, energy_alarm };

const char* to_string(RunStatus status);

struct Trajectory {
  EvolutionConfig config;
  GridPtr grid;
  std::vector<double> times;
  std::vector<RadialField> snapshots;
  RunStatus status = RunStatus::complete;
  std::string status_detail;
  /// Free-form description of the initial data.
  std::string initial_data;

  std::size_t size() const noexcept { return times.size(); }
  double t_minus() const { return times.front(); }
  double t_plus() const { return times.back(); }

  /// Index of the snapshot at time t (to 1e-12 relative), or
  /// ErrorCode::not_a_snapshot_time.
  std::size_t index_of(double t) const;
};

/// e^{-i mu tau |u|^{4/(n-2)}} u, the exact flow of i u_t = mu F(u).
RadialField nonlinear_phase_step(const RadialField& u, double mu, double tau);

/// Evolves u0 from t_minus to t_plus in steps of cfg.dt (which must divide
/// the span), storing every snapshot_stride-th state and always the last one.
/// A blowup flag or energy alarm ends the run early and is recorded in
/// Trajectory::status; the state that raised it is stored as the last
/// snapshot. Runs with mu < 0 are checked after every step, others at
/// snapshots only.
Trajectory evolve(const SpectralTransform& transform, const RadialField& u0,
                  double t_minus, double t_plus, const EvolutionConfig& cfg);

/// L^2 norm of u(t) - e^{i(t-t0)Delta} u(t0) + i int_{t0}^t e^{i(t-s)Delta}
/// F(u(s)) ds, the s-integral by the trapezoid rule over stored snapshots.
double duhamel_residual(const SpectralTransform& transform,
                        const Trajectory& traj, double t0, double t);

/// (e^{i(t - t_-)Delta} u(t_-), e^{i(t - t_+)Delta} u(t_+)).
std::pair<RadialField, RadialField> linear_flows(
    const SpectralTransform& transform, const Trajectory& traj, double t);

struct BlowupRecord {
  bool flagged = false;
  std::optional<double> alarm_time;
  /// ||grad u(t)||_{L^2} at every snapshot.
  std::vector<double> gradient_norms;
  /// Potential energy magnitude above kinetic energy at t_-.
  bool glassey_indicator = false;
};

BlowupRecord blowup_monitor(const SpectralTransform& transform,
                            const Trajectory& traj);

}  // namespace nlslab
