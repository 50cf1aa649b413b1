#pragma once

// Scenario -> trajectory -> diagnostics report, and report verification.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nlslab/nls_dynamics.hpp"
#include "nlslab/scenario.hpp"
#include "nlslab/spectral_transform.hpp"

namespace nlslab {

using Report = nlohmann::ordered_json;

/// Bound on the Morawetz ratio LHS / (A |I|^{1/2} E), calibrated on the
/// defocusing reference Gaussian and frozen.
inline constexpr double morawetz_calibrated_bound = 1.0;

std::shared_ptr<const SpectralTransform> build_transform(const Scenario& s);
RadialField initial_field(const Scenario& s, const GridPtr& grid);
Trajectory simulate(const Scenario& s, const SpectralTransform& transform);

/// Full diagnostics for a stored or fresh trajectory of scenario s.
Report analyze(const Scenario& s, const SpectralTransform& transform,
               const Trajectory& traj);
Report run_scenario(const Scenario& s);

struct CheckResult {
  std::string name;
  double value = 0.0;
  std::optional<double> lower;
  std::optional<double> upper;
  bool pass = false;
};

/// Re-evaluates every entry of report["checks"]. Throws ErrorCode::config
/// ("incomplete") when required report sections are missing.
std::vector<CheckResult> verify_report(const Report& report);
nlohmann::ordered_json checks_to_json(const std::vector<CheckResult>& checks);

/// report.json plus series/*.csv in dir.
void write_report(const Report& report, const std::filesystem::path& dir);
/// Time series of the conserved quantities and local masses as CSV files.
void write_series(const Scenario& s, const SpectralTransform& transform,
                  const Trajectory& traj, const std::filesystem::path& dir);

/// Formats a double with 17 significant digits.
std::string format_number(double v);

}  // namespace nlslab
