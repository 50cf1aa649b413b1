#include "nlslab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "nlslab/concentration.hpp"
#include "nlslab/error.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/morawetz.hpp"
#include "nlslab/trajectory_io.hpp"

namespace nlslab {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Tolerances of the report checks.
constexpr double mass_drift_tol = 1e-10;
constexpr double energy_drift_tol = 1e-5;
constexpr double duhamel_relative_tol = 1e-3;
constexpr double duhamel_order_min = 1.8;
constexpr double strang_ratio_low = 3.2;
constexpr double strang_ratio_high = 4.8;
constexpr double mass_flux_ratio_max = 1.05;
constexpr double momentum_defect_tol = 1e-3;
constexpr double cauchy_schwarz_slack = 1e-12;

class Checks {
 public:
  void add(std::string name, double value, std::optional<double> lower,
           std::optional<double> upper) {
    CheckResult c{std::move(name), value, lower, upper, false};
    c.pass = std::isfinite(value) && (!lower || value >= *lower) &&
             (!upper || value <= *upper);
    list_.push_back(std::move(c));
  }
  const std::vector<CheckResult>& list() const { return list_; }

 private:
  std::vector<CheckResult> list_;
};

ordered_json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::vector<AdmissiblePair> pairs_for(const Scenario& s) {
  if (!s.analysis.admissible_pairs.empty()) return s.analysis.admissible_pairs;
  return default_admissible_pairs(s.dimension);
}

std::string pair_label(const AdmissiblePair& p) {
  const auto text = [](const boost::rational<long long>& inv) -> std::string {
    if (inv.numerator() == 0) return "inf";
    const auto v = 1 / inv;
    if (v.denominator() == 1) return std::to_string(v.numerator());
    return std::to_string(v.numerator()) + "/" + std::to_string(v.denominator());
  };
  return "(" + text(p.inv_q) + "," + text(p.inv_r) + ")";
}

double l2_distance(const RadialField& a, const RadialField& b) {
  RadialField d = a;
  for (std::size_t i = 0; i < d.size(); ++i) d.values[i] -= b.values[i];
  return lp_norm(d, 2.0);
}

ordered_json blowup_json(const BlowupRecord& b) {
  return {{"flagged", b.flagged},
          {"alarm_time", b.alarm_time ? ordered_json(*b.alarm_time) : ordered_json(nullptr)},
          {"glassey_indicator", b.glassey_indicator},
          {"gradient_norms", b.gradient_norms}};
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::shared_ptr<const SpectralTransform> build_transform(const Scenario& s) {
  return std::make_shared<const SpectralTransform>(
      make_grid(s.dimension, s.node_count, s.r_max));
}

RadialField initial_field(const Scenario& s, const GridPtr& grid) {
  const InitialDataSpec& d = s.initial;
  RadialField u;
  if (d.family == "gaussian") {
    u = RadialField::sample(grid, [&](double r) {
      const double x = r / d.width;
      return cplx(d.amplitude * std::exp(-x * x));
    });
  } else if (d.family == "ring") {
    u = RadialField::sample(grid, [&](double r) {
      const double x = (r - d.center) / d.width;
      return cplx(d.amplitude * std::exp(-x * x));
    });
  } else if (d.family == "file") {
    u = read_snapshot(d.file, grid);
  } else {
    throw Error(ErrorCode::config, "unknown initial data family '" + d.family + "'");
  }
  if (d.noise > 0.0) {
    // Smooth seeded perturbation: random combination of low radial modes
    // under the envelope of the profile scale.
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double peak = 0.0;
    for (const auto& v : u.values) peak = std::max(peak, std::abs(v));
    constexpr int modes = 6;
    double a[modes], b[modes];
    for (int k = 0; k < modes; ++k) {
      a[k] = coef(rng);
      b[k] = coef(rng);
    }
    const double scale = d.family == "ring" ? d.center + d.width : d.width;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = grid->nodes()[i];
      const double env = std::exp(-(r * r) / (4.0 * scale * scale));
      cplx p{};
      for (int k = 0; k < modes; ++k)
        p += cplx(a[k], b[k]) * std::cos((k + 1) * r / scale) / double(modes);
      u.values[i] += d.noise * peak * env * p;
    }
  }
  return u;
}

Trajectory simulate(const Scenario& s, const SpectralTransform& transform) {
  const RadialField u0 = initial_field(s, transform.grid());
  Trajectory traj = evolve(transform, u0, s.t_minus, s.t_plus, s.evolution_config());
  traj.initial_data = scenario_to_json(s)["initial_data"].dump();
  return traj;
}

Report analyze(const Scenario& s, const SpectralTransform& transform,
               const Trajectory& traj) {
  if (traj.size() < 2)
    throw Error(ErrorCode::insufficient_data, "trajectory holds fewer than 2 snapshots");
  const double mu = traj.config.mu;
  const double t0 = traj.t_minus();
  const double t1 = traj.t_plus();
  const double span = t1 - t0;
  const AnalysisSpec& an = s.analysis;
  Checks checks;

  Report rep;
  rep["scenario"] = scenario_to_json(s);
  rep["transform"] = {{"validated_horizon", transform.validated_horizon()},
                      {"round_trip_error", transform.round_trip_error()},
                      {"spacing", traj.grid->spacing()}};
  rep["run"] = {{"status", to_string(traj.status)},
                {"detail", traj.status_detail},
                {"snapshots", traj.size()},
                {"t_minus", t0},
                {"t_end", t1}};

  // Conserved quantities.
  std::vector<double> mass, kin, pot, tot;
  for (const auto& u : traj.snapshots) {
    const EnergyParts e = energy(transform, u, mu);
    mass.push_back(abs_pow_integral(u, 2.0));
    kin.push_back(e.kinetic);
    pot.push_back(e.potential);
    tot.push_back(e.total);
  }
  // Energy drift is relative to kinetic + |potential|, which equals E for
  // mu >= 0 and stays away from zero for mu < 0.
  const double energy_scale = kin[0] + std::abs(pot[0]);
  double mass_drift = 0.0, energy_drift = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (mass[0] > 0.0) mass_drift = std::max(mass_drift, std::abs(mass[i] - mass[0]) / mass[0]);
    if (energy_scale > 0.0)
      energy_drift = std::max(energy_drift, std::abs(tot[i] - tot[0]) / energy_scale);
  }
  rep["series"] = {{"t", traj.times},
                   {"mass", mass},
                   {"kinetic", kin},
                   {"potential", pot},
                   {"energy", tot}};
  rep["conservation"] = {{"mass_drift", mass_drift}, {"energy_drift", energy_drift}};
  const double unit = std::max(1.0, span);
  checks.add("conservation.mass_drift", mass_drift, std::nullopt, mass_drift_tol * unit);
  if (traj.status != RunStatus::blowup)
    checks.add("conservation.energy_drift", energy_drift, std::nullopt,
               energy_drift_tol * unit);

  // Blowup monitor.
  const BlowupRecord blow = blowup_monitor(transform, traj);
  rep["blowup"] = blowup_json(blow);
  if (mu >= 0.0)
    checks.add("blowup.silent", blow.flagged ? 1.0 : 0.0, std::nullopt, 0.0);
  else if (blow.glassey_indicator)
    checks.add("blowup.flagged", blow.flagged ? 1.0 : 0.0, 1.0, std::nullopt);

  // Duhamel consistency and refinement.
  const double duh = duhamel_residual(transform, traj, t0, t1);
  const double u_end = lp_norm(traj.snapshots.back(), 2.0);
  const double duh_rel = u_end > 0.0 ? duh / u_end : duh;
  rep["duhamel"] = {{"t0", t0}, {"t", t1}, {"residual", duh}, {"relative", duh_rel}};
  if (traj.status == RunStatus::complete)
    checks.add("duhamel.relative_residual", duh_rel, std::nullopt, duhamel_relative_tol);

  // Three runs at dt, 2 dt, 4 dt (snapshot stride fixed, so snapshot spacing
  // scales with dt). The scenario run is the finest member when its step
  // count is divisible by 4 and the coarsest otherwise.
  ordered_json refine = {{"performed", false}};
  if (an.refinement && mu != 0.0 && traj.status == RunStatus::complete) {
    const bool coarsen = std::fmod(std::round(span / s.dt), 4.0) == 0.0;
    const double base = coarsen ? s.dt : 0.25 * s.dt;
    std::vector<Trajectory> runs;
    for (double factor : {1.0, 2.0, 4.0}) {
      if (coarsen ? factor == 1.0 : factor == 4.0) {
        runs.push_back(traj);
        continue;
      }
      Scenario v = s;
      v.dt = factor * base;
      runs.push_back(simulate(v, transform));
    }
    bool complete = true;
    ordered_json statuses = ordered_json::array();
    for (const auto& r : runs) {
      complete = complete && r.status == RunStatus::complete;
      statuses.push_back(to_string(r.status));
    }
    double order = NAN, ratio = NAN;
    refine = {{"performed", true},
              {"dt", {base, 2.0 * base, 4.0 * base}},
              {"status", statuses}};
    if (complete) {
      std::vector<double> res;
      for (const auto& r : runs) res.push_back(duhamel_residual(transform, r, t0, t1));
      const double d1 = l2_distance(runs[0].snapshots.back(), runs[1].snapshots.back());
      const double d2 = l2_distance(runs[1].snapshots.back(), runs[2].snapshots.back());
      order = std::log2(res[1] / res[0]);
      ratio = d2 / d1;
      refine["duhamel_residuals"] = res;
      refine["duhamel_order"] = order;
      refine["duhamel_order_coarse"] = std::log2(res[2] / res[1]);
      refine["self_differences"] = {d1, d2};
      refine["self_difference_ratio"] = ratio;
    }
    checks.add("refinement.duhamel_order", order, duhamel_order_min, std::nullopt);
    checks.add("refinement.strang_ratio", ratio, strang_ratio_low, strang_ratio_high);
  }
  rep["refinement"] = refine;

  // Local mass flux and Hardy ratios.
  ordered_json flux = ordered_json::array();
  if (traj.size() >= 3) {
    for (double r : an.flux_radii) {
      const MassFluxReport m = mass_flux_check(transform, traj, r);
      flux.push_back({{"radius", r},
                      {"max_rate", m.max_rate},
                      {"energy_scale", m.energy_scale},
                      {"bound", m.bound},
                      {"ratio", m.ratio}});
      checks.add("mass_flux.ratio_R" + format_number(r), m.ratio, std::nullopt,
                 mass_flux_ratio_max);
    }
  }
  rep["mass_flux"] = {{"constant", mass_flux_constant()}, {"radii", flux}};

  ordered_json hardy = ordered_json::array();
  double hardy_sup = 0.0;
  if (tot[0] > 0.0) {
    for (double r : an.hardy_radii) {
      const double h = hardy_ratio(transform, traj.snapshots.front(), mu, r);
      hardy_sup = std::max(hardy_sup, h);
      hardy.push_back({{"radius", r}, {"ratio", h}});
    }
  }
  rep["hardy"] = {{"ratios", hardy}, {"sup", hardy_sup}};

  // Strichartz norms over the whole run.
  const auto pairs = pairs_for(s);
  ordered_json stz = ordered_json::array();
  for (int k = 0; k <= 1; ++k) {
    const StrichartzReport sr = strichartz_norm(transform, traj, {t0, t1}, k, pairs);
    ordered_json entries = ordered_json::array();
    for (const auto& e : sr.entries)
      entries.push_back({{"pair", pair_label(e.pair)}, {"value", e.value}});
    stz.push_back({{"order", k}, {"norm", sr.norm}, {"entries", entries}});
  }
  rep["strichartz"] = stz;

  // Morawetz ratio and the momentum-flux identity.
  ordered_json mor = ordered_json::array();
  if (tot[0] > 0.0) {
    for (double a : an.morawetz_a) {
      const MorawetzReport m = morawetz_check(transform, traj, {t0, t1}, a, an.morawetz_eps);
      mor.push_back({{"A", a},
                     {"radius", m.radius},
                     {"lhs_eps", m.lhs_eps},
                     {"lhs_extrapolated", m.lhs_extrapolated},
                     {"lhs_direct", m.lhs_direct},
                     {"energy", m.energy},
                     {"ratio", m.ratio}});
      if (mu >= 0.0)
        checks.add("morawetz.ratio_A" + format_number(a), m.ratio, std::nullopt,
                   morawetz_calibrated_bound);
    }
  }
  ordered_json momentum = nullptr;
  if (traj.size() >= 3) {
    const MomentumFluxReport m = momentum_flux_identity_check(traj, an.momentum_eps);
    momentum = {{"eps", m.eps},
                {"max_defect", m.max_defect},
                {"scale", m.scale},
                {"normalized_defect", m.normalized}};
    if (traj.status == RunStatus::complete)
      checks.add("morawetz.momentum_identity", m.normalized, std::nullopt,
                 momentum_defect_tol);
  }
  rep["morawetz"] = {{"calibrated_bound", morawetz_calibrated_bound},
                     {"ratios", mor},
                     {"momentum_identity", momentum}};

  // Interval machinery.
  ordered_json conc;
  const std::vector<double> dens = critical_densities(traj);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < dens.size(); ++i)
    total += 0.5 * (traj.times[i + 1] - traj.times[i]) * (dens[i] + dens[i + 1]);
  const double eta = an.eta > 0.0 ? an.eta : (total > 0.0 ? total / 10.0 : 1.0);
  conc["eta"] = eta;
  conc["total_mass"] = total;
  try {
    IntervalDecomposition dec = greedy_subdivide(traj.times, dens, eta);
    const double threshold = std::pow(eta, an.c1);
    const ExceptionalReport ex = classify_exceptional(transform, traj, dec, threshold);

    std::size_t window_violations = 0;
    ordered_json ivs = ordered_json::array();
    for (std::size_t j = 0; j < dec.size(); ++j) {
      const SubInterval& iv = dec.intervals[j];
      if (j > 0 && iv.begin != dec.intervals[j - 1].end) ++window_violations;
      if (!iv.tail && (iv.mass < eta * (1.0 - 1e-12) || iv.mass > 2.0 * eta * (1.0 + 1e-12)))
        ++window_violations;
      ivs.push_back({{"begin", iv.begin},
                     {"end", iv.end},
                     {"mass", iv.mass},
                     {"linear_mass_minus", ex.mass_minus[j]},
                     {"linear_mass_plus", ex.mass_plus[j]},
                     {"exceptional", iv.exceptional},
                     {"tail", iv.tail}});
    }
    if (!dec.intervals.empty() &&
        (dec.intervals.front().begin != t0 || dec.intervals.back().end != t1))
      ++window_violations;
    conc["decomposition"] = {{"count", dec.size()},
                             {"tail", dec.has_tail()},
                             {"intervals", ivs}};
    conc["exceptional"] = {{"threshold", threshold},
                           {"count", ex.count},
                           {"count_bound", ex.count_bound},
                           {"total_linear_minus", ex.total_minus},
                           {"total_linear_plus", ex.total_plus}};
    checks.add("concentration.subdivision_violations", double(window_violations),
               std::nullopt, 0.0);
    checks.add("concentration.exceptional_budget",
               double(ex.count) - ex.count_bound, std::nullopt, 0.0);

    ordered_json tech = ordered_json::array();
    ordered_json bubbles = ordered_json::array();
    double min_linear_ratio = INFINITY;
    for (std::size_t j = 0; j < dec.size(); ++j) {
      const SubInterval& iv = dec.intervals[j];
      if (iv.tail) continue;
      const TechnicalReport t = technical_check(transform, traj, dec, j);
      min_linear_ratio = std::min({min_linear_ratio, t.ratio_minus, t.ratio_plus});
      tech.push_back({{"interval", j},
                      {"nonlinear_mass", t.nonlinear_mass},
                      {"linear_mass_minus", t.linear_mass_minus},
                      {"linear_mass_plus", t.linear_mass_plus},
                      {"ratio_minus", t.ratio_minus},
                      {"ratio_plus", t.ratio_plus}});
      if (iv.exceptional) continue;
      const auto b = find_bubble(transform, traj, dec, j, an.bubble_fraction);
      if (b)
        bubbles.push_back({{"interval", j},
                           {"witness_time", b->witness_time},
                           {"radius", b->radius},
                           {"inverse_scale", b->inverse_scale},
                           {"attained_mass", b->attained_mass},
                           {"threshold", b->threshold}});
    }
    conc["technical"] = tech;
    conc["bubbles"] = bubbles;
    if (!tech.empty())
      checks.add("concentration.technical_positive", min_linear_ratio, 0.0, std::nullopt);

    if (!dec.intervals.empty()) {
      const WindowExtremes w = window_extremes(dec);
      double cs_min = INFINITY;
      for (std::size_t a = 0; a < dec.size(); ++a)
        for (std::size_t b = a; b < dec.size(); ++b) {
          const double h = half_norm_ratio(dec, a, b);
          cs_min = std::min(cs_min, largest_fraction(dec, a, b) * h * h);
        }
      conc["windows"] = {{"half_norm_sup", w.half_norm_sup},
                         {"half_norm_window", {w.half_norm_first, w.half_norm_last}},
                         {"largest_fraction_inf", w.largest_fraction_inf},
                         {"largest_fraction_window", {w.largest_first, w.largest_last}},
                         {"cauchy_schwarz_min", cs_min}};
      checks.add("concentration.cauchy_schwarz", cs_min, 1.0 - cauchy_schwarz_slack,
                 std::nullopt);
    }

    NestOptions nopt;
    nopt.kappa = an.kappa;
    const auto nest = bourgain_nest(dec, nopt);
    if (nest) {
      std::size_t dyadic_violations = 0;
      for (std::size_t k = 0; k + 1 < nest->chain.size(); ++k)
        if (!(dec.intervals[nest->chain[k]].length() >=
              2.0 * dec.intervals[nest->chain[k + 1]].length()))
          ++dyadic_violations;
      conc["nest"] = {{"t_star", nest->t_star},
                      {"chain", nest->chain},
                      {"K", nest->length()},
                      {"kappa", nest->kappa},
                      {"within_kappa", nest->within_kappa}};
      checks.add("concentration.nest_dyadic_violations", double(dyadic_violations),
                 std::nullopt, 0.0);
    } else {
      conc["nest"] = nullptr;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::resolution) throw;
    conc["error"] = e.what();
    checks.add("concentration.resolution", 1.0, std::nullopt, 0.0);
  }
  rep["concentration"] = conc;
  rep["checks"] = checks_to_json(checks.list());
  return rep;
}

Report run_scenario(const Scenario& s) {
  const auto transform = build_transform(s);
  const Trajectory traj = simulate(s, *transform);
  return analyze(s, *transform, traj);
}

ordered_json checks_to_json(const std::vector<CheckResult>& checks) {
  ordered_json out = ordered_json::array();
  for (const auto& c : checks)
    out.push_back({{"name", c.name},
                   {"value", c.value},
                   {"lower", optional_number(c.lower)},
                   {"upper", optional_number(c.upper)},
                   {"pass", c.pass}});
  return out;
}

std::vector<CheckResult> verify_report(const Report& report) {
  for (const char* key : {"scenario", "run", "conservation", "duhamel", "mass_flux",
                          "morawetz", "concentration", "checks"})
    if (!report.contains(key))
      throw Error(ErrorCode::config,
                  std::string("incomplete report: missing section '") + key + "'");
  Checks checks;
  for (const auto& c : report.at("checks")) {
    const auto num = [](const ordered_json& j) -> std::optional<double> {
      if (j.is_null()) return std::nullopt;
      return j.get<double>();
    };
    const ordered_json& v = c.at("value");
    checks.add(c.at("name").get<std::string>(),
               v.is_null() ? NAN : v.get<double>(), num(c.at("lower")),
               num(c.at("upper")));
  }
  // Conservation is recomputed from the stored series so that a tampered
  // series cannot hide behind a stale check entry.
  const auto& series = report.at("series");
  const auto mass = series.at("mass").get<std::vector<double>>();
  double drift = 0.0;
  for (double m : mass)
    if (mass.front() > 0.0) drift = std::max(drift, std::abs(m - mass.front()) / mass.front());
  const auto t = series.at("t").get<std::vector<double>>();
  const double unit = std::max(1.0, t.back() - t.front());
  checks.add("series.mass_drift", drift, std::nullopt, mass_drift_tol * unit);
  return checks.list();
}

void write_report(const Report& report, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "series", ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  {
    std::ofstream out(dir / "report.json", std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write report in " + dir.string());
    out << report.dump(2) << '\n';
  }
  const auto& series = report.at("series");
  std::ofstream csv(dir / "series" / "conservation.csv", std::ios::trunc);
  if (!csv) throw Error(ErrorCode::io, "cannot write series in " + dir.string());
  csv << "t,mass_l2_squared,kinetic_energy,potential_energy,energy\n";
  const auto t = series.at("t").get<std::vector<double>>();
  const auto m = series.at("mass").get<std::vector<double>>();
  const auto k = series.at("kinetic").get<std::vector<double>>();
  const auto p = series.at("potential").get<std::vector<double>>();
  const auto e = series.at("energy").get<std::vector<double>>();
  for (std::size_t i = 0; i < t.size(); ++i)
    csv << format_number(t[i]) << ',' << format_number(m[i]) << ','
        << format_number(k[i]) << ',' << format_number(p[i]) << ','
        << format_number(e[i]) << '\n';

  if (report.contains("concentration") &&
      report.at("concentration").contains("decomposition")) {
    std::ofstream dc(dir / "series" / "decomposition.csv", std::ios::trunc);
    dc << "begin,end,critical_mass,linear_mass_minus,linear_mass_plus,exceptional,tail\n";
    for (const auto& iv : report.at("concentration").at("decomposition").at("intervals"))
      dc << format_number(iv.at("begin").get<double>()) << ','
         << format_number(iv.at("end").get<double>()) << ','
         << format_number(iv.at("mass").get<double>()) << ','
         << format_number(iv.at("linear_mass_minus").get<double>()) << ','
         << format_number(iv.at("linear_mass_plus").get<double>()) << ','
         << (iv.at("exceptional").get<bool>() ? 1 : 0) << ','
         << (iv.at("tail").get<bool>() ? 1 : 0) << '\n';
  }
}

void write_series(const Scenario& s, const SpectralTransform& transform,
                  const Trajectory& traj, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  const double mu = traj.config.mu;
  {
    std::ofstream csv(dir / "conservation.csv", std::ios::trunc);
    if (!csv) throw Error(ErrorCode::io, "cannot write series in " + dir.string());
    csv << "t,mass_l2_squared,kinetic_energy,potential_energy,energy,gradient_l2\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const EnergyParts e = energy(transform, traj.snapshots[i], mu);
      csv << format_number(traj.times[i]) << ','
          << format_number(abs_pow_integral(traj.snapshots[i], 2.0)) << ','
          << format_number(e.kinetic) << ',' << format_number(e.potential) << ','
          << format_number(e.total) << ',' << format_number(std::sqrt(2.0 * e.kinetic))
          << '\n';
    }
  }
  {
    std::ofstream csv(dir / "local_mass.csv", std::ios::trunc);
    csv << "t";
    for (double r : s.analysis.flux_radii) csv << ",local_mass_R" << format_number(r);
    csv << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
      csv << format_number(traj.times[i]);
      for (double r : s.analysis.flux_radii)
        csv << ',' << format_number(local_mass(traj.snapshots[i], r));
      csv << '\n';
    }
  }
  {
    std::ofstream csv(dir / "profiles.csv", std::ios::trunc);
    csv << "r";
    for (std::size_t i = 0; i < traj.size(); ++i) csv << ",abs_u_t" << format_number(traj.times[i]);
    csv << '\n';
    for (std::size_t k = 0; k < traj.grid->size(); ++k) {
      csv << format_number(traj.grid->nodes()[k]);
      for (const auto& u : traj.snapshots) csv << ',' << format_number(std::abs(u.values[k]));
      csv << '\n';
    }
  }
}

}  // namespace nlslab
