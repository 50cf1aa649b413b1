#pragma once

// Scenario documents: parsing, dotted-key overrides and validation.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "nlslab/functionals.hpp"
#include "nlslab/nls_dynamics.hpp"

namespace nlslab {

struct InitialDataSpec {
  std::string family = "gaussian";  // gaussian | ring | file
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;              // ring only
  std::filesystem::path file;       // file only, a snapshot binary
  /// Relative amplitude of a seeded smooth random perturbation; 0 disables it.
  double noise = 0.0;
};

struct AnalysisSpec {
  /// Subdivision parameter; 0 selects total critical mass / 10.
  double eta = 0.0;
  /// Exceptional threshold eta^c1; c1 < 1 keeps it above eta when eta < 1.
  double c1 = 0.5;
  double bubble_fraction = 0.1;
  double kappa = 4.0;
  /// Strichartz exponent pairs; empty selects default_admissible_pairs(n).
  /// In documents each exponent is an integer, a fraction string such as
  /// "10/3", or "inf".
  std::vector<AdmissiblePair> admissible_pairs;
  std::vector<double> morawetz_a = {1.0, 2.0, 4.0};
  std::pair<double, double> morawetz_eps = {1e-2, 1e-3};
  double momentum_eps = 0.25;
  std::vector<double> flux_radii = {1.0, 2.0, 4.0};
  std::vector<double> hardy_radii = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  /// Re-run at 2 dt and 4 dt for convergence orders.
  bool refinement = true;
};

struct Scenario {
  std::string id = "scenario";
  int dimension = 3;
  double mu = 1.0;
  std::size_t node_count = 1024;
  double r_max = 32.0;
  double t_minus = 0.0;
  double t_plus = 1.0;
  double dt = 1e-3;
  std::size_t snapshot_stride = 10;
  double energy_drift_alarm = 1e-3;
  double blowup_gradient_factor = 10.0;
  InitialDataSpec initial;
  AnalysisSpec analysis;
  std::uint64_t seed = 0;

  EvolutionConfig evolution_config() const;
};

/// Every violated constraint, one message each; empty when valid.
std::vector<std::string> validation_errors(const Scenario& s);

/// Applies "a.b.c=value" to the document. The value is parsed as JSON when
/// possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Parses and validates. Unknown keys and all constraint violations are
/// reported together in one ErrorCode::config error. A relative initial-data
/// file is resolved against base_dir.
Scenario scenario_from_json(const nlohmann::json& doc,
                            const std::filesystem::path& base_dir = {});
nlohmann::ordered_json scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::filesystem::path& file,
                       const std::vector<std::string>& overrides = {});

}  // namespace nlslab
