#pragma once

// The Morawetz weight a(x) = (eps^2 + |x|^2)^{1/2} chi(x), the momentum-flux
// identity it is paired with, and the Morawetz spacetime ratio.

#include <vector>

#include "nlslab/functionals.hpp"
#include "nlslab/nls_dynamics.hpp"

namespace nlslab {

/// Radial derivatives of a and the two Laplacian quantities.
struct WeightJet {
  double a = 0.0;
  double d1 = 0.0;  // a'
  double d2 = 0.0;  // a''
  double laplacian = 0.0;        // Delta a
  double neg_bilaplacian = 0.0;  // -Delta Delta a
};

/// Closed forms on |x| <= 1, where the cutoff equals one. Throws
/// outside_validated_range for r > 1.
WeightJet morawetz_weight_eval(int n, double eps, double r);

/// a(x) on all of R^n. The cutoff is 1 on [0,1], 0 on [2,inf), and a
/// degree-17 smoothstep in between, so a is C^8 and -Delta Delta a is C^4.
class MorawetzWeight {
 public:
  MorawetzWeight(int n, double eps);

  int dimension() const noexcept { return n_; }
  double eps() const noexcept { return eps_; }
  WeightJet operator()(double r) const;

 private:
  int n_;
  double eps_;
};

struct MomentumFluxReport {
  double eps = 0.0;
  /// Per interior snapshot: LHS d/dt int a' Im(u_r conj u) by five-point
  /// central differences (three-point next to the ends or where the spacing
  /// changes), and the three right-hand integrals.
  std::vector<double> times;
  std::vector<double> lhs;
  std::vector<double> convexity;      // 2 int a'' |u_r|^2
  std::vector<double> bilaplacian;    // 1/2 int (-Delta Delta a) |u|^2
  std::vector<double> nonlinear;      // mu (2/n) int Delta a |u|^{2n/(n-2)}
  double max_defect = 0.0;
  double scale = 0.0;      // largest magnitude among all four columns
  double normalized = 0.0; // max_defect / scale
};

/// Checks d/dt int a' Im(u_r conj u) = 2 int a''|u_r|^2
///   + 1/2 int (-Delta Delta a)|u|^2 + mu (2/n) int Delta a |u|^{2n/(n-2)}.
/// include_nonlinear = false drops the last term.
MomentumFluxReport momentum_flux_identity_check(const Trajectory& traj,
                                                double eps,
                                                bool include_nonlinear = true);

struct MorawetzReport {
  TimeInterval interval;
  double a_factor = 1.0;
  double radius = 0.0;           // A |I|^{1/2}
  std::vector<double> eps;       // regularisations used
  std::vector<double> lhs_eps;   // LHS with 1/|x| -> (eps^2+|x|^2)^{-1/2}
  double lhs_extrapolated = 0.0; // eps -> 0 Richardson value
  double lhs_direct = 0.0;       // 1/|x| at the cell-centred nodes
  double energy = 0.0;
  double ratio = 0.0;            // lhs_extrapolated / (A |I|^{1/2} E)
};

/// int_I int_{|x| <= A|I|^{1/2}} |u|^{2n/(n-2)} / |x| dx dt over snapshots,
/// relative to A |I|^{1/2} E(u(I.begin)). eps_pair holds two regularisations
/// (default 1e-2, 1e-3), extrapolated assuming an eps^2 leading error.
MorawetzReport morawetz_check(const SpectralTransform& transform,
                              const Trajectory& traj, TimeInterval interval,
                              double a_factor,
                              std::pair<double, double> eps_pair = {1e-2, 1e-3});

}  // namespace nlslab
