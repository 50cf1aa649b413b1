// Command-line front end: simulate, analyze, verify, sweep, export-plots.
//
// Exit codes: 0 success or all checks pass, 1 failed checks, 2 configuration
// error (including scenarios the numerics reject), 3 runtime alarm (blowup
// or energy drift ended the run).

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nlslab/error.hpp"
#include "nlslab/pipeline.hpp"
#include "nlslab/scenario.hpp"
#include "nlslab/trajectory_io.hpp"

namespace fs = std::filesystem;
using namespace nlslab;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_config = 2;
constexpr int exit_alarm = 3;

struct CommonArgs {
  std::vector<std::string> configs;
  std::string out;
  std::vector<std::string> overrides;
  std::optional<long long> seed;
};

std::vector<std::string> all_overrides(const CommonArgs& a) {
  std::vector<std::string> o = a.overrides;
  if (a.seed) o.push_back("seed=" + std::to_string(*a.seed));
  return o;
}

Scenario load_single(const CommonArgs& a) {
  if (a.configs.size() != 1)
    throw Error(ErrorCode::config, "exactly one --config is required");
  return load_scenario(a.configs.front(), all_overrides(a));
}

void write_scenario_file(const Scenario& s, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream out(dir / "scenario.json", std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + (dir / "scenario.json").string());
  out << scenario_to_json(s).dump(2) << '\n';
}

int print_checks(const std::vector<CheckResult>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    std::printf("%s %s value=%s", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                format_number(c.value).c_str());
    if (c.lower) std::printf(" lower=%s", format_number(*c.lower).c_str());
    if (c.upper) std::printf(" upper=%s", format_number(*c.upper).c_str());
    std::printf("\n");
    ok = ok && c.pass;
  }
  return ok ? exit_pass : exit_fail;
}

// Scenario of a trajectory directory: --config when given, else the
// scenario.json written next to the trajectory by simulate.
Scenario scenario_for(const CommonArgs& a, const fs::path& traj_dir) {
  if (!a.configs.empty()) return load_single(a);
  const fs::path file = traj_dir / "scenario.json";
  if (!fs::exists(file))
    throw Error(ErrorCode::config, "no --config and no scenario.json in " + traj_dir.string());
  return load_scenario(file, all_overrides(a));
}

int cmd_simulate(const CommonArgs& a) {
  const Scenario s = load_single(a);
  const auto transform = build_transform(s);
  const Trajectory traj = simulate(s, *transform);
  const fs::path dir = a.out.empty() ? fs::path(s.id) : fs::path(a.out);
  write_trajectory(traj, dir);
  write_scenario_file(s, dir);
  std::printf("%s: %s, %zu snapshots -> %s\n", s.id.c_str(), to_string(traj.status),
              traj.size(), dir.string().c_str());
  return traj.status == RunStatus::complete ? exit_pass : exit_alarm;
}

int cmd_analyze(const CommonArgs& a, const std::string& trajectory) {
  const Trajectory traj = read_trajectory(trajectory);
  const Scenario s = scenario_for(a, trajectory);
  const auto transform = build_transform(s);
  const Report rep = analyze(s, *transform, traj);
  const fs::path dir = a.out.empty() ? fs::path(trajectory) / "report" : fs::path(a.out);
  write_report(rep, dir);
  std::printf("%s: report -> %s\n", s.id.c_str(), dir.string().c_str());
  return traj.status == RunStatus::complete ? exit_pass : exit_alarm;
}

int cmd_verify(const CommonArgs& a, const std::string& report_file) {
  Report rep;
  if (!report_file.empty()) {
    std::ifstream in(report_file);
    if (!in) throw Error(ErrorCode::config, "cannot open report " + report_file);
    try {
      rep = Report::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::config, "report is not valid JSON: " + std::string(e.what()));
    }
  } else {
    const Scenario s = load_single(a);
    rep = run_scenario(s);
    if (!a.out.empty()) write_report(rep, a.out);
  }
  return print_checks(verify_report(rep));
}

struct SweepOutcome {
  std::string id;
  std::string status;
  std::size_t failed = 0;
  std::size_t total = 0;
};

SweepOutcome sweep_one(const Scenario& s, const fs::path& dir) {
  const auto transform = build_transform(s);
  const Trajectory traj = simulate(s, *transform);
  const Report rep = analyze(s, *transform, traj);
  write_scenario_file(s, dir);
  write_report(rep, dir);
  SweepOutcome o{s.id, to_string(traj.status)};
  for (const auto& c : verify_report(rep)) {
    ++o.total;
    if (!c.pass) ++o.failed;
  }
  return o;
}

int cmd_sweep(const CommonArgs& a, unsigned jobs) {
  if (a.configs.empty()) throw Error(ErrorCode::config, "sweep needs at least one --config");
  std::vector<Scenario> scenarios;
  for (const auto& c : a.configs) scenarios.push_back(load_scenario(c, all_overrides(a)));
  std::sort(scenarios.begin(), scenarios.end(),
            [](const Scenario& x, const Scenario& y) { return x.id < y.id; });
  for (std::size_t k = 1; k < scenarios.size(); ++k)
    if (scenarios[k].id == scenarios[k - 1].id)
      throw Error(ErrorCode::config, "duplicate scenario id '" + scenarios[k].id + "'");
  const fs::path root = a.out.empty() ? fs::path("sweep") : fs::path(a.out);

  // Each scenario writes only its own directory; results are gathered in id
  // order after all workers finish.
  std::vector<SweepOutcome> outcomes(scenarios.size());
  jobs = std::max(1u, jobs);
  for (std::size_t start = 0; start < scenarios.size(); start += jobs) {
    std::vector<std::future<SweepOutcome>> batch;
    for (std::size_t k = start; k < std::min(scenarios.size(), start + jobs); ++k)
      batch.push_back(std::async(std::launch::async, sweep_one, std::cref(scenarios[k]),
                                 root / scenarios[k].id));
    for (std::size_t k = 0; k < batch.size(); ++k) outcomes[start + k] = batch[k].get();
  }

  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  bool ok = true;
  for (const auto& o : outcomes) {
    summary.push_back({{"id", o.id}, {"status", o.status}, {"checks", o.total},
                       {"failed", o.failed}});
    std::printf("%s %s status=%s failed=%zu/%zu\n", o.failed == 0 ? "PASS" : "FAIL",
                o.id.c_str(), o.status.c_str(), o.failed, o.total);
    ok = ok && o.failed == 0;
  }
  std::ofstream out(root / "summary.json", std::ios::trunc);
  out << summary.dump(2) << '\n';
  return ok ? exit_pass : exit_fail;
}

int cmd_export(const CommonArgs& a, const std::string& trajectory) {
  const Trajectory traj = read_trajectory(trajectory);
  const Scenario s = scenario_for(a, trajectory);
  const auto transform = build_transform(s);
  const fs::path dir = a.out.empty() ? fs::path(trajectory) / "plots" : fs::path(a.out);
  write_series(s, *transform, traj, dir);
  std::printf("%s: series -> %s\n", s.id.c_str(), dir.string().c_str());
  return exit_pass;
}

void add_common(CLI::App* sub, CommonArgs& a, bool many_configs) {
  if (many_configs)
    sub->add_option("--config", a.configs, "Scenario file (repeatable)");
  else
    sub->add_option("--config", a.configs, "Scenario file")->expected(1);
  sub->add_option("--out", a.out, "Output directory");
  sub->add_option("--override", a.overrides, "Dotted key=value applied to every scenario")
      ->allow_extra_args(false);
  sub->add_option("--seed", a.seed, "Seed for randomised initial-data perturbations");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial energy-critical NLS numerical lab"};
  app.require_subcommand(1);
  CommonArgs args;
  std::string trajectory, report;
  unsigned jobs = 1;

  auto* sim = app.add_subcommand("simulate", "Evolve a scenario and store its trajectory");
  add_common(sim, args, false);
  auto* ana = app.add_subcommand("analyze", "Build the diagnostics report of a stored trajectory");
  add_common(ana, args, false);
  ana->add_option("--trajectory", trajectory, "Trajectory directory")->required();
  auto* ver = app.add_subcommand("verify", "Print the pass/fail list of a report or scenario");
  add_common(ver, args, false);
  ver->add_option("--report", report, "report.json to re-verify instead of running --config");
  auto* swp = app.add_subcommand("sweep", "Run and verify several scenarios");
  add_common(swp, args, true);
  swp->add_option("--jobs", jobs, "Scenarios evaluated concurrently");
  auto* exp = app.add_subcommand("export-plots", "Write CSV series of a stored trajectory");
  add_common(exp, args, false);
  exp->add_option("--trajectory", trajectory, "Trajectory directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_pass : exit_config;
  }

  try {
    if (*sim) return cmd_simulate(args);
    if (*ana) return cmd_analyze(args, trajectory);
    if (*ver) return cmd_verify(args, report);
    if (*swp) return cmd_sweep(args, jobs);
    if (*exp) return cmd_export(args, trajectory);
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", to_string(e.code()), e.what());
    // Every library error stems from a scenario that cannot be run as given.
    return exit_config;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_alarm;
  }
  return exit_config;
}
