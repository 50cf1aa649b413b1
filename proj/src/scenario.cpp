#include "nlslab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "nlslab/error.hpp"

namespace nlslab {

namespace fs = std::filesystem;
using nlohmann::json;

EvolutionConfig Scenario::evolution_config() const {
  EvolutionConfig c;
  c.dimension = dimension;
  c.mu = mu;
  c.dt = dt;
  c.snapshot_stride = snapshot_stride;
  c.energy_drift_alarm = energy_drift_alarm;
  c.blowup_gradient_factor = blowup_gradient_factor;
  return c;
}

namespace {

using Rational = boost::rational<long long>;

// Inverse of an exponent written as an integer, "p/q" or "inf".
Rational inverse_exponent(const nlohmann::json& j) {
  if (j.is_number_integer()) {
    const long long v = j.get<long long>();
    if (v <= 0) throw std::invalid_argument("exponent must be positive");
    return Rational(1, v);
  }
  if (!j.is_string()) throw std::invalid_argument("exponent must be an integer or string");
  const std::string s = j.get<std::string>();
  if (s == "inf") return Rational(0);
  const auto slash = s.find('/');
  std::size_t used = 0;
  const long long num = std::stoll(s.substr(0, slash), &used);
  if (used != s.substr(0, slash).size()) throw std::invalid_argument("bad exponent");
  long long den = 1;
  if (slash != std::string::npos) {
    const std::string tail = s.substr(slash + 1);
    den = std::stoll(tail, &used);
    if (used != tail.size()) throw std::invalid_argument("bad exponent");
  }
  if (num <= 0 || den <= 0) throw std::invalid_argument("exponent must be positive");
  return Rational(den, num);
}

std::string exponent_text(const Rational& inverse) {
  if (inverse.numerator() == 0) return "inf";
  const Rational v = 1 / inverse;
  if (v.denominator() == 1) return std::to_string(v.numerator());
  return std::to_string(v.numerator()) + "/" + std::to_string(v.denominator());
}

}  // namespace

std::vector<std::string> validation_errors(const Scenario& s) {
  std::vector<std::string> e;
  const auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      e.push_back(std::string(name) + " must be positive and finite");
  };
  if (s.id.empty()) e.push_back("id must be nonempty");
  if (s.dimension < 3) e.push_back("dimension must be >= 3");
  if (!(s.mu == 1.0 || s.mu == -1.0 || s.mu == 0.0)) e.push_back("mu must be 1, -1 or 0");
  if (s.node_count < 16) e.push_back("grid.node_count must be >= 16");
  positive(s.r_max, "grid.r_max");
  if (!(s.t_plus > s.t_minus)) e.push_back("time span [t_minus, t_plus] must be nonempty");
  positive(s.dt, "time.dt");
  if (s.dt > 0.0 && s.t_plus > s.t_minus) {
    const double steps = std::round((s.t_plus - s.t_minus) / s.dt);
    if (steps < 1.0 ||
        std::abs(steps * s.dt - (s.t_plus - s.t_minus)) > 1e-9 * (s.t_plus - s.t_minus))
      e.push_back("time.dt must divide the time span");
  }
  if (s.snapshot_stride == 0) e.push_back("time.snapshot_stride must be >= 1");
  positive(s.energy_drift_alarm, "alarms.energy_drift");
  positive(s.blowup_gradient_factor, "alarms.blowup_gradient_factor");

  const InitialDataSpec& d = s.initial;
  if (d.family != "gaussian" && d.family != "ring" && d.family != "file")
    e.push_back("initial_data.family '" + d.family +
                "' is not one of gaussian, ring, file");
  if (d.family == "gaussian" || d.family == "ring") {
    if (!(d.amplitude >= 0.0) || !std::isfinite(d.amplitude))
      e.push_back("initial_data.amplitude must be >= 0 and finite");
    positive(d.width, "initial_data.width");
  }
  if (d.family == "ring") positive(d.center, "initial_data.center");
  if (d.family == "file" && d.file.empty())
    e.push_back("initial_data.file is required for the file family");
  if (!(d.noise >= 0.0) || !std::isfinite(d.noise))
    e.push_back("initial_data.noise must be >= 0");

  const AnalysisSpec& a = s.analysis;
  if (!(a.eta >= 0.0) || !std::isfinite(a.eta)) e.push_back("analysis.eta must be >= 0");
  positive(a.c1, "analysis.c1");
  if (!(a.bubble_fraction > 0.0 && a.bubble_fraction < 1.0))
    e.push_back("analysis.bubble_fraction must lie in (0,1)");
  positive(a.kappa, "analysis.kappa");
  for (const auto& p : a.admissible_pairs)
    if (!is_admissible(p, s.dimension))
      e.push_back("analysis.admissible_pairs: (" + exponent_text(p.inv_q) + ", " +
                  exponent_text(p.inv_r) + ") is not admissible");
  for (double v : a.morawetz_a)
    if (!(v >= 1.0)) e.push_back("analysis.morawetz_a entries must be >= 1");
  positive(a.morawetz_eps.first, "analysis.morawetz_eps[0]");
  positive(a.morawetz_eps.second, "analysis.morawetz_eps[1]");
  if (a.morawetz_eps.first == a.morawetz_eps.second)
    e.push_back("analysis.morawetz_eps entries must differ");
  positive(a.momentum_eps, "analysis.momentum_eps");
  for (double v : a.flux_radii) positive(v, "analysis.flux_radii entries");
  for (double v : a.hardy_radii) positive(v, "analysis.hardy_radii entries");
  return e;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

// Reads typed fields from one JSON object and records unknown keys and type
// errors instead of throwing.
class Reader {
 public:
  Reader(const json& obj, std::string prefix, std::vector<std::string>& errors)
      : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {
    if (!obj_.is_object()) errors_.push_back(where("") + " must be an object");
  }

  ~Reader() {
    if (!obj_.is_object()) return;
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) errors_.push_back("unknown key " + where(it.key()));
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    if (!obj_.is_object()) return nullptr;
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  template <class T>
  void get(const std::string& key, T& out) {
    const json* j = find(key);
    if (!j) return;
    try {
      if constexpr (std::is_same_v<T, double>)
        out = number(*j);
      else
        out = j->get<T>();
    } catch (const std::exception&) {
      errors_.push_back(where(key) + " has the wrong type");
    }
  }

  std::string where(const std::string& key) const {
    if (prefix_.empty()) return key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

  static double number(const json& j) {
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
      throw std::invalid_argument("not a number");
    }
    return j.get<double>();
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

}  // namespace

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorCode::config, "override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  json* node = &doc;
  const std::vector<std::string> parts = split(key, '.');
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty())
      throw Error(ErrorCode::config, "override key '" + key + "' has an empty component");
    if (!node->is_object()) {
      if (!node->is_null())
        throw Error(ErrorCode::config, "override key '" + key + "' descends into a non-object");
      *node = json::object();
    }
    node = &(*node)[parts[i]];
  }
  *node = value;
}

Scenario scenario_from_json(const json& doc, const fs::path& base_dir) {
  Scenario s;
  std::vector<std::string> errors;
  {
    Reader top(doc, "", errors);
    top.get("id", s.id);
    top.get("dimension", s.dimension);
    top.get("mu", s.mu);
    top.get("seed", s.seed);
    if (const json* g = top.find("grid")) {
      Reader r(*g, "grid", errors);
      r.get("node_count", s.node_count);
      r.get("r_max", s.r_max);
    }
    if (const json* t = top.find("time")) {
      Reader r(*t, "time", errors);
      r.get("t_minus", s.t_minus);
      r.get("t_plus", s.t_plus);
      r.get("dt", s.dt);
      r.get("snapshot_stride", s.snapshot_stride);
    }
    if (const json* a = top.find("alarms")) {
      Reader r(*a, "alarms", errors);
      r.get("energy_drift", s.energy_drift_alarm);
      r.get("blowup_gradient_factor", s.blowup_gradient_factor);
    }
    if (const json* d = top.find("initial_data")) {
      Reader r(*d, "initial_data", errors);
      r.get("family", s.initial.family);
      r.get("amplitude", s.initial.amplitude);
      r.get("width", s.initial.width);
      r.get("center", s.initial.center);
      r.get("noise", s.initial.noise);
      std::string file;
      r.get("file", file);
      if (!file.empty()) {
        s.initial.file = file;
        if (s.initial.file.is_relative() && !base_dir.empty())
          s.initial.file = base_dir / s.initial.file;
      }
    }
    if (const json* a = top.find("analysis")) {
      Reader r(*a, "analysis", errors);
      AnalysisSpec& an = s.analysis;
      r.get("eta", an.eta);
      r.get("c1", an.c1);
      r.get("bubble_fraction", an.bubble_fraction);
      r.get("kappa", an.kappa);
      r.get("momentum_eps", an.momentum_eps);
      r.get("refinement", an.refinement);
      const auto numbers = [&](const char* key, std::vector<double>& out) {
        const json* j = r.find(key);
        if (!j) return;
        try {
          out.clear();
          for (const auto& v : *j) out.push_back(Reader::number(v));
        } catch (const std::exception&) {
          errors.push_back(r.where(key) + " must be a list of numbers");
        }
      };
      numbers("morawetz_a", an.morawetz_a);
      numbers("flux_radii", an.flux_radii);
      numbers("hardy_radii", an.hardy_radii);
      std::vector<double> eps;
      numbers("morawetz_eps", eps);
      if (eps.size() == 2)
        an.morawetz_eps = {eps[0], eps[1]};
      else if (r.find("morawetz_eps"))
        errors.push_back("analysis.morawetz_eps must hold exactly two values");
      if (const json* p = r.find("admissible_pairs")) {
        try {
          an.admissible_pairs.clear();
          for (const auto& pair : *p) {
            if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("pair");
            an.admissible_pairs.push_back(
                {inverse_exponent(pair[0]), inverse_exponent(pair[1])});
          }
        } catch (const std::exception&) {
          errors.push_back("analysis.admissible_pairs must be a list of [q, r] pairs");
        }
      }
    }
  }
  for (auto& e : validation_errors(s)) errors.push_back(std::move(e));
  if (!errors.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw Error(ErrorCode::config, msg);
  }
  return s;
}

nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& p : s.analysis.admissible_pairs)
    pairs.push_back({exponent_text(p.inv_q), exponent_text(p.inv_r)});
  nlohmann::ordered_json init = {{"family", s.initial.family},
                                 {"amplitude", s.initial.amplitude},
                                 {"width", s.initial.width},
                                 {"center", s.initial.center},
                                 {"noise", s.initial.noise}};
  if (!s.initial.file.empty()) init["file"] = s.initial.file.string();
  return {
      {"id", s.id},
      {"dimension", s.dimension},
      {"mu", s.mu},
      {"seed", s.seed},
      {"grid", {{"node_count", s.node_count}, {"r_max", s.r_max}}},
      {"time",
       {{"t_minus", s.t_minus},
        {"t_plus", s.t_plus},
        {"dt", s.dt},
        {"snapshot_stride", s.snapshot_stride}}},
      {"alarms",
       {{"energy_drift", s.energy_drift_alarm},
        {"blowup_gradient_factor", s.blowup_gradient_factor}}},
      {"initial_data", init},
      {"analysis",
       {{"eta", s.analysis.eta},
        {"c1", s.analysis.c1},
        {"bubble_fraction", s.analysis.bubble_fraction},
        {"kappa", s.analysis.kappa},
        {"admissible_pairs", pairs},
        {"morawetz_a", s.analysis.morawetz_a},
        {"morawetz_eps", {s.analysis.morawetz_eps.first, s.analysis.morawetz_eps.second}},
        {"momentum_eps", s.analysis.momentum_eps},
        {"flux_radii", s.analysis.flux_radii},
        {"hardy_radii", s.analysis.hardy_radii},
        {"refinement", s.analysis.refinement}}},
  };
}

Scenario load_scenario(const fs::path& file, const std::vector<std::string>& overrides) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::config, "cannot open scenario " + file.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::config, "scenario " + file.string() + " is not valid JSON: " + e.what());
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return scenario_from_json(doc, file.parent_path());
}

}  // namespace nlslab
