#include "nlslab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlslab/error.hpp"

namespace nlslab {

namespace {

// Relative slack on the [eta, 2 eta] window; absorbs the rounding of the
// running segment sum.
constexpr double mass_slack = 1e-12;

double segment_mass(std::span<const double> t, std::span<const double> d,
                    std::size_t k) {
  return 0.5 * (t[k + 1] - t[k]) * (d[k] + d[k + 1]);
}

double trapezoid(std::span<const double> t, std::span<const double> d,
                 std::size_t first, std::size_t last) {
  double s = 0.0;
  for (std::size_t k = first; k < last; ++k) s += segment_mass(t, d, k);
  return s;
}

void check_index(const IntervalDecomposition& decomp, std::size_t index) {
  if (index >= decomp.size())
    throw Error(ErrorCode::invalid_input,
                "interval index " + std::to_string(index) + " out of range");
}

struct LinearDensities {
  std::vector<double> minus;
  std::vector<double> plus;
};

// Critical densities of u_- and u_+ at snapshots first..last (indexed from
// first).
LinearDensities linear_densities(const SpectralTransform& transform,
                                 const Trajectory& traj, std::size_t first,
                                 std::size_t last) {
  const double p = spacetime_exponent(traj.grid->dimension());
  LinearDensities out;
  for (std::size_t i = first; i <= last; ++i) {
    const auto [um, up] = linear_flows(transform, traj, traj.times[i]);
    out.minus.push_back(abs_pow_integral(um, p));
    out.plus.push_back(abs_pow_integral(up, p));
  }
  return out;
}

std::vector<std::vector<std::size_t>> runs(const std::vector<std::size_t>& idx) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k == 0 || idx[k] != idx[k - 1] + 1) out.emplace_back();
    out.back().push_back(idx[k]);
  }
  return out;
}

const std::vector<std::size_t>& longest(const std::vector<std::vector<std::size_t>>& rs) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < rs.size(); ++k)
    if (rs[k].size() > rs[best].size()) best = k;
  return rs[best];
}

}  // namespace

std::vector<double> critical_densities(const Trajectory& traj) {
  const double p = spacetime_exponent(traj.grid->dimension());
  std::vector<double> d;
  d.reserve(traj.size());
  for (const auto& u : traj.snapshots) d.push_back(abs_pow_integral(u, p));
  return d;
}

IntervalDecomposition greedy_subdivide(std::span<const double> times,
                                       std::span<const double> densities,
                                       double eta) {
  if (times.size() != densities.size())
    throw Error(ErrorCode::invalid_input, "times and densities differ in length");
  if (times.size() < 2)
    throw Error(ErrorCode::insufficient_data, "subdivision needs 2 snapshots");
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw Error(ErrorCode::invalid_input, "eta must be positive");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(densities[i] >= 0.0) || !std::isfinite(densities[i]))
      throw Error(ErrorCode::invalid_input, "densities must be finite and >= 0");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw Error(ErrorCode::invalid_input, "times must increase");
  }

  IntervalDecomposition dec;
  dec.eta = eta;
  std::size_t start = 0;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double m = segment_mass(times, densities, k);
    dec.total_mass += m;
    acc += m;
    if (acc > 2.0 * eta * (1.0 + mass_slack))
      throw Error(ErrorCode::resolution,
                  "interval starting at t = " + std::to_string(times[start]) +
                      " reaches mass " + std::to_string(acc) + " > 2 eta = " +
                      std::to_string(2.0 * eta) +
                      "; store snapshots more densely");
    if (acc >= eta * (1.0 - mass_slack)) {
      dec.intervals.push_back({times[start], times[k + 1], start, k + 1, acc});
      start = k + 1;
      acc = 0.0;
    }
  }
  if (start + 1 < times.size()) {
    SubInterval tail{times[start], times.back(), start, times.size() - 1, acc};
    tail.tail = true;
    dec.intervals.push_back(tail);
  }
  return dec;
}

IntervalDecomposition greedy_subdivide(const Trajectory& traj, double eta) {
  const std::vector<double> d = critical_densities(traj);
  return greedy_subdivide(traj.times, d, eta);
}

ExceptionalReport classify_exceptional(const SpectralTransform& transform,
                                       const Trajectory& traj,
                                       IntervalDecomposition& decomp,
                                       double threshold) {
  if (!(threshold > 0.0))
    throw Error(ErrorCode::invalid_input, "exceptional threshold must be positive");
  ExceptionalReport rep;
  rep.threshold = threshold;
  if (decomp.intervals.empty()) return rep;
  const LinearDensities lin = linear_densities(transform, traj, 0, traj.size() - 1);
  for (auto& iv : decomp.intervals) {
    const double mm = trapezoid(traj.times, lin.minus, iv.first, iv.last);
    const double mp = trapezoid(traj.times, lin.plus, iv.first, iv.last);
    rep.mass_minus.push_back(mm);
    rep.mass_plus.push_back(mp);
    rep.total_minus += mm;
    rep.total_plus += mp;
    iv.exceptional = mm > threshold || mp > threshold;
    if (iv.exceptional) ++rep.count;
  }
  rep.count_bound = (rep.total_minus + rep.total_plus) / threshold;
  return rep;
}

TechnicalReport technical_check(const SpectralTransform& transform,
                                const Trajectory& traj,
                                const IntervalDecomposition& decomp,
                                std::size_t index) {
  check_index(decomp, index);
  const SubInterval& iv = decomp.intervals[index];
  if (iv.mass < 0.5 * decomp.eta || iv.mass > 2.0 * decomp.eta)
    throw Error(ErrorCode::hypothesis_violated,
                "interval mass " + std::to_string(iv.mass) +
                    " outside [eta/2, 2 eta] with eta = " +
                    std::to_string(decomp.eta));
  const LinearDensities lin = linear_densities(transform, traj, iv.first, iv.last);
  const auto times = std::span(traj.times).subspan(iv.first, iv.last - iv.first + 1);
  TechnicalReport rep;
  rep.interval = index;
  rep.nonlinear_mass = iv.mass;
  rep.linear_mass_minus = trapezoid(times, lin.minus, 0, times.size() - 1);
  rep.linear_mass_plus = trapezoid(times, lin.plus, 0, times.size() - 1);
  rep.ratio_minus = rep.linear_mass_minus / iv.mass;
  rep.ratio_plus = rep.linear_mass_plus / iv.mass;
  return rep;
}

std::optional<BubbleReport> find_bubble(const SpectralTransform& transform,
                                        const Trajectory& traj,
                                        const IntervalDecomposition& decomp,
                                        std::size_t index, double mass_fraction,
                                        BubbleOptions options) {
  check_index(decomp, index);
  if (!(mass_fraction > 0.0 && mass_fraction < 1.0))
    throw Error(ErrorCode::invalid_input, "mass fraction must lie in (0,1)");
  if (!(options.ladder_ratio > 1.0))
    throw Error(ErrorCode::invalid_input, "ladder ratio must exceed 1");
  const SubInterval& iv = decomp.intervals[index];
  if (!(iv.length() > 0.0))
    throw Error(ErrorCode::invalid_input, "empty interval");

  const double e = energy(transform, traj.snapshots[iv.first], traj.config.mu).total;
  if (!(e > 0.0)) return std::nullopt;
  const double threshold = mass_fraction * std::sqrt(e) * std::sqrt(iv.length());
  const RadialGrid& g = *traj.grid;
  const double base = options.ladder_base > 0.0 ? options.ladder_base : g.spacing();

  for (double r = base; r <= 2.0 * g.r_max(); r *= options.ladder_ratio) {
    double worst = std::numeric_limits<double>::infinity();
    std::size_t witness = iv.first;
    for (std::size_t i = iv.first; i <= iv.last; ++i) {
      const double m = local_mass(traj.snapshots[i], r);
      if (m < worst) {
        worst = m;
        witness = i;
      }
    }
    if (worst >= threshold) {
      BubbleReport rep;
      rep.interval = index;
      rep.witness_time = traj.times[witness];
      rep.radius = r;
      rep.inverse_scale = 1.0 / r;
      rep.attained_mass = worst;
      rep.threshold = threshold;
      return rep;
    }
  }
  return std::nullopt;
}

double half_norm_ratio(const IntervalDecomposition& decomp, std::size_t first,
                       std::size_t last) {
  check_index(decomp, last);
  if (first > last) throw Error(ErrorCode::invalid_input, "window is empty");
  double sum = 0.0;
  for (std::size_t j = first; j <= last; ++j)
    sum += std::sqrt(decomp.intervals[j].length());
  const double len = decomp.intervals[last].end - decomp.intervals[first].begin;
  return sum / std::sqrt(len);
}

double largest_fraction(const IntervalDecomposition& decomp, std::size_t first,
                        std::size_t last) {
  check_index(decomp, last);
  if (first > last) throw Error(ErrorCode::invalid_input, "window is empty");
  double best = 0.0;
  for (std::size_t j = first; j <= last; ++j)
    best = std::max(best, decomp.intervals[j].length());
  const double len = decomp.intervals[last].end - decomp.intervals[first].begin;
  return best / len;
}

WindowExtremes window_extremes(const IntervalDecomposition& decomp) {
  WindowExtremes w;
  w.largest_fraction_inf = std::numeric_limits<double>::infinity();
  const auto& iv = decomp.intervals;
  for (std::size_t a = 0; a < iv.size(); ++a) {
    double sum = 0.0;
    double best = 0.0;
    for (std::size_t b = a; b < iv.size(); ++b) {
      sum += std::sqrt(iv[b].length());
      best = std::max(best, iv[b].length());
      const double len = iv[b].end - iv[a].begin;
      const double h = sum / std::sqrt(len);
      const double f = best / len;
      if (h > w.half_norm_sup) {
        w.half_norm_sup = h;
        w.half_norm_first = a;
        w.half_norm_last = b;
      }
      if (f < w.largest_fraction_inf) {
        w.largest_fraction_inf = f;
        w.largest_first = a;
        w.largest_last = b;
      }
    }
  }
  if (iv.empty()) w.largest_fraction_inf = 0.0;
  return w;
}

std::optional<NestResult> bourgain_nest(const IntervalDecomposition& decomp,
                                        NestOptions options) {
  if (!(options.half_factor > 0.0 && options.half_factor <= 0.5))
    throw Error(ErrorCode::invalid_input, "half_factor must lie in (0, 1/2]");
  const auto& iv = decomp.intervals;
  std::vector<std::size_t> eligible;
  for (std::size_t j = 0; j < iv.size(); ++j)
    if (!iv[j].exceptional && !iv[j].tail) eligible.push_back(j);
  if (eligible.empty()) return std::nullopt;

  NestResult res;
  std::vector<std::size_t> current = longest(runs(eligible));
  while (current.size() >= options.floor) {
    std::size_t pick = current.front();
    for (std::size_t j : current)
      if (iv[j].length() > iv[pick].length()) pick = j;
    res.chain.push_back(pick);
    const double cap = options.half_factor * iv[pick].length();
    std::vector<std::size_t> survivors;
    for (std::size_t j : current)
      if (iv[j].length() <= cap) survivors.push_back(j);
    if (survivors.empty()) break;
    current = longest(runs(survivors));
  }
  if (res.chain.empty()) return std::nullopt;

  res.t_star = 0.5 * (iv[current.front()].begin + iv[current.back()].end);
  for (std::size_t j : res.chain) {
    const double dist =
        std::max({0.0, iv[j].begin - res.t_star, res.t_star - iv[j].end});
    res.kappa = std::max(res.kappa, dist / iv[j].length());
  }
  res.within_kappa = res.kappa <= options.kappa;
  return res;
}

}  // namespace nlslab
