#pragma once

// Interval machinery on a trajectory: greedy subdivision by critical
// spacetime mass, exceptional intervals, bubble search, window ratios and
// the nested-interval selection.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nlslab/functionals.hpp"
#include "nlslab/nls_dynamics.hpp"
#include "nlslab/spectral_transform.hpp"

namespace nlslab {

struct SubInterval {
  double begin = 0.0;
  double end = 0.0;
  /// Snapshot indices of the endpoints.
  std::size_t first = 0;
  std::size_t last = 0;
  /// int_I int |u|^{2(n+2)/(n-2)} dx dt.
  double mass = 0.0;
  bool exceptional = false;
  bool tail = false;

  double length() const noexcept { return end - begin; }
};

/// Consecutive intervals covering the trajectory span. Every non-tail mass
/// lies in [eta, 2 eta]; a final interval below eta is marked tail.
struct IntervalDecomposition {
  double eta = 0.0;
  double total_mass = 0.0;
  std::vector<SubInterval> intervals;

  std::size_t size() const noexcept { return intervals.size(); }
  bool has_tail() const noexcept {
    return !intervals.empty() && intervals.back().tail;
  }
};

/// int |u(t_i)|^{2(n+2)/(n-2)} dx for every snapshot.
std::vector<double> critical_densities(const Trajectory& traj);

/// Sweeps the trapezoid segment masses of densities over times from left to
/// right and closes an interval once its mass reaches eta. Throws
/// ErrorCode::resolution when one interval would exceed 2 eta.
IntervalDecomposition greedy_subdivide(std::span<const double> times,
                                       std::span<const double> densities,
                                       double eta);
IntervalDecomposition greedy_subdivide(const Trajectory& traj, double eta);

struct ExceptionalReport {
  double threshold = 0.0;
  std::vector<double> mass_minus;  // per interval, u_- = e^{i(t-t_-)Delta}u(t_-)
  std::vector<double> mass_plus;   // per interval, u_+ = e^{i(t-t_+)Delta}u(t_+)
  double total_minus = 0.0;
  double total_plus = 0.0;
  std::size_t count = 0;
  /// (total_minus + total_plus) / threshold, an upper bound for count.
  double count_bound = 0.0;
};

/// Marks an interval exceptional when either linear flow carries critical
/// mass above threshold on it; writes the flags into decomp.
ExceptionalReport classify_exceptional(const SpectralTransform& transform,
                                       const Trajectory& traj,
                                       IntervalDecomposition& decomp,
                                       double threshold);

struct TechnicalReport {
  std::size_t interval = 0;
  double nonlinear_mass = 0.0;
  double linear_mass_minus = 0.0;
  double linear_mass_plus = 0.0;
  double ratio_minus = 0.0;  // linear / nonlinear
  double ratio_plus = 0.0;
};

/// Requires the interval mass to lie in [eta/2, 2 eta]; otherwise throws
/// ErrorCode::hypothesis_violated.
TechnicalReport technical_check(const SpectralTransform& transform,
                                const Trajectory& traj,
                                const IntervalDecomposition& decomp,
                                std::size_t index);

struct BubbleReport {
  std::size_t interval = 0;
  double witness_time = 0.0;  // snapshot where the local mass is smallest
  double radius = 0.0;
  double inverse_scale = 0.0; // 1 / radius
  double attained_mass = 0.0;
  double threshold = 0.0;
};

struct BubbleOptions {
  /// First ladder radius; 0 means the grid spacing.
  double ladder_base = 0.0;
  double ladder_ratio = 1.4142135623730951;
};

/// Smallest ladder radius R with min_{t in I} Mass(u(t), B(0,R)) >=
/// mass_fraction * E^{1/2} |I|^{1/2}, E the energy at the start of I.
std::optional<BubbleReport> find_bubble(const SpectralTransform& transform,
                                        const Trajectory& traj,
                                        const IntervalDecomposition& decomp,
                                        std::size_t index, double mass_fraction,
                                        BubbleOptions options = {});

/// sum_{j=first}^{last} |I_j|^{1/2} / |I_first u ... u I_last|^{1/2}.
double half_norm_ratio(const IntervalDecomposition& decomp, std::size_t first,
                       std::size_t last);
/// max_{first<=j<=last} |I_j| / |I_first u ... u I_last|.
double largest_fraction(const IntervalDecomposition& decomp, std::size_t first,
                        std::size_t last);

struct WindowExtremes {
  double half_norm_sup = 0.0;
  std::size_t half_norm_first = 0, half_norm_last = 0;
  double largest_fraction_inf = 0.0;
  std::size_t largest_first = 0, largest_last = 0;
};

/// Sup of half_norm_ratio and inf of largest_fraction over all O(J^2) windows.
WindowExtremes window_extremes(const IntervalDecomposition& decomp);

struct NestResult {
  double t_star = 0.0;
  std::vector<std::size_t> chain;
  /// max_k dist(t_star, I_{j_k}) / |I_{j_k}|.
  double kappa = 0.0;
  /// kappa <= NestOptions::kappa.
  bool within_kappa = true;

  std::size_t length() const noexcept { return chain.size(); }
};

struct NestOptions {
  double half_factor = 0.5;
  /// Recursion stops on a component with fewer intervals than this.
  std::size_t floor = 1;
  /// Closeness factor the chain is checked against.
  double kappa = 4.0;
};

/// Drops exceptional and tail intervals, takes the component with the most
/// intervals, selects its largest interval, discards intervals longer than
/// half_factor times it, and recurses on the largest surviving run. Ties go
/// to the lowest index. t_star is the midpoint of the final component.
/// Empty when no interval survives the first step.
std::optional<NestResult> bourgain_nest(const IntervalDecomposition& decomp,
                                        NestOptions options = {});

}  // namespace nlslab
