#pragma once

// Scalar functionals of radial fields and trajectories: energy, local mass,
// the mass-flux and Hardy bounds, spacetime and Strichartz norms.

#include <vector>

#include <boost/rational.hpp>

#include "nlslab/nls_dynamics.hpp"
#include "nlslab/radial_domain.hpp"
#include "nlslab/spectral_transform.hpp"

namespace nlslab {

struct EnergyParts {
  double kinetic = 0.0;    // 1/2 ||grad u||^2
  double potential = 0.0;  // mu (n-2)/(2n) int |u|^{2n/(n-2)}
  double total = 0.0;
};

EnergyParts energy(const SpectralTransform& transform, const RadialField& u,
                   double mu);

/// chi(s) = 1 for s <= 1/2, 0 for s >= 1, quintic smoothstep in between.
/// C^2, non-increasing.
struct QuinticBump {
  static double value(double s);
  static double derivative(double s);
  /// max |chi'| = 15/4.
  static double max_slope();
};

/// (int chi^2(|x|/R) |u|^2 dx)^{1/2}.
double local_mass(const RadialField& u, double radius);

/// Constant C in |d/dt Mass(u(t), B(0,R))| <= C E^{1/2} / R for the quintic
/// bump: 2 sqrt(2) max|chi'|.
double mass_flux_constant();

struct MassFluxReport {
  double radius = 0.0;
  double max_rate = 0.0;   // max_t |d Mass / dt|, central differences
  double energy_scale = 0.0;
  double bound = 0.0;      // mass_flux_constant() * sqrt(energy_scale) / R
  double ratio = 0.0;      // max_rate / bound
};

/// The energy scale is E(t_-) for mu >= 0 and the largest kinetic energy
/// along the trajectory for mu < 0.
MassFluxReport mass_flux_check(const SpectralTransform& transform,
                               const Trajectory& traj, double radius);

/// local_mass(u, R) / (E^{1/2} R); 0 when E = 0.
double hardy_ratio(const SpectralTransform& transform, const RadialField& u,
                   double mu, double radius);

struct TimeInterval {
  double begin = 0.0;
  double end = 0.0;
  double length() const noexcept { return end - begin; }
};

/// (int_I ||u(t)||_{L^r}^q dt)^{1/q} by the trapezoid rule over snapshots.
/// The endpoints of I must be snapshot times. q or r may be infinite.
double spacetime_norm(const Trajectory& traj, double q, double r,
                      TimeInterval interval);

/// Exponent pair stored as reciprocals 1/q, 1/r, so q = infinity is 0.
struct AdmissiblePair {
  boost::rational<long long> inv_q;
  boost::rational<long long> inv_r;

  double q() const;
  double r() const;
};

/// 2 <= q, r <= infinity and 1/q + n/(2r) = n/4, exactly.
bool is_admissible(const AdmissiblePair& pair, int n);
/// Same condition with tolerance 1e-12; infinities allowed.
bool is_admissible(double q, double r, int n);

/// (inf,2), (2(n+2)/n, 2(n+2)/n), (2(n+2)/(n-2), 2n(n+2)/(n^2+4)), and the
/// endpoint (2, 2n/(n-2)).
std::vector<AdmissiblePair> default_admissible_pairs(int n);

struct StrichartzEntry {
  AdmissiblePair pair;
  double value = 0.0;
};

struct StrichartzReport {
  int order = 0;  // k
  double norm = 0.0;
  std::vector<StrichartzEntry> entries;
};

/// sup over the given pairs of || |grad|^k u ||_{L^q_t L^r_x(I)}, k in {0, 1}.
StrichartzReport strichartz_norm(const SpectralTransform& transform,
                                 const Trajectory& traj, TimeInterval interval,
                                 int order,
                                 const std::vector<AdmissiblePair>& pairs);

}  // namespace nlslab
