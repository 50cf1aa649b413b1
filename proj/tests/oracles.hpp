#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's numerical code paths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

using cplx = std::complex<double>;

/// e^{it Delta} exp(-|x|^2) in R^n: (1 + 4it)^{-n/2} exp(-|x|^2 / (1 + 4it)).
inline cplx gaussian_free_evolution(int n, double t, double r) {
  const cplx z(1.0, 4.0 * t);
  return std::pow(z, -0.5 * n) * std::exp(-r * r / z);
}

inline double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// int_0^inf f(r) |S^{n-1}| r^{n-1} dr by adaptive Gauss-Kronrod on [0, cut].
template <class F>
double radial_integral(int n, F f, double cut = 12.0) {
  const auto g = [&](double r) { return f(r) * sphere_area(n) * std::pow(r, n - 1); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, cut, 25,
                                                                       1e-14);
}

/// (|grad|^{-1} f)(r) in R^3 for radial f from the Riesz kernel
/// (2 pi^2)^{-1} |x - y|^{-2}. The angular integral gives
/// (pi r)^{-1} int_0^inf f(s) s log|(r + s)/(r - s)| ds for r > 0 and
/// (2/pi) int_0^inf f(s) ds at r = 0.
template <class F>
double inverse_gradient_3d(F f, double r, double cut = 12.0) {
  boost::math::quadrature::tanh_sinh<double> ts;
  if (r == 0.0)
    return 2.0 / std::numbers::pi *
           boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, cut, 25,
                                                                         1e-14);
  const auto g = [&](double s) {
    return f(s) * s * std::log(std::abs((r + s) / (r - s)));
  };
  const double left = ts.integrate(g, 0.0, r);
  const double right = ts.integrate(g, r, cut);
  return (left + right) / (std::numbers::pi * r);
}

/// Boundaries of the greedy subdivision for a continuous density with
/// antiderivative F on [t0, t1]: the k-th boundary solves F(b_k) = F(t0) + k eta.
/// Bisection on each level.
template <class Antiderivative>
std::vector<double> cumulative_boundaries(Antiderivative F, double t0, double t1,
                                          double eta) {
  std::vector<double> out;
  const double total = F(t1) - F(t0);
  for (int k = 1; k * eta <= total * (1.0 + 1e-12); ++k) {
    const double level = F(t0) + k * eta;
    double lo = t0, hi = t1;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (F(mid) < level ? lo : hi) = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

/// Brute-force window quantities over intervals of the given lengths,
/// summed left to right.
inline double half_norm(const std::vector<double>& begin, const std::vector<double>& end,
                        std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t j = a; j <= b; ++j) s += std::sqrt(end[j] - begin[j]);
  return s / std::sqrt(end[b] - begin[a]);
}

inline double largest(const std::vector<double>& begin, const std::vector<double>& end,
                      std::size_t a, std::size_t b) {
  double m = 0.0;
  for (std::size_t j = a; j <= b; ++j) m = std::max(m, end[j] - begin[j]);
  return m / (end[b] - begin[a]);
}

/// Longest chain of distinct eligible intervals with |I_{j_k}| >= 2 |I_{j_{k+1}}|
/// that admits a time t with dist(t, I_{j_k}) <= kappa |I_{j_k}| for every k.
/// Exhaustive over subsets; intended for J <= 16.
inline std::size_t exhaustive_nest_length(const std::vector<double>& begin,
                                          const std::vector<double>& end,
                                          const std::vector<bool>& eligible,
                                          double kappa) {
  const std::size_t J = begin.size();
  std::size_t best = 0;
  for (unsigned long mask = 1; mask < (1ul << J); ++mask) {
    std::vector<std::size_t> idx;
    bool ok = true;
    for (std::size_t j = 0; j < J && ok; ++j)
      if (mask >> j & 1ul) {
        if (!eligible[j]) ok = false;
        idx.push_back(j);
      }
    if (!ok || idx.size() <= best) continue;
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return end[x] - begin[x] > end[y] - begin[y];
    });
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < idx.size() && ok; ++k) {
      const double len = end[idx[k]] - begin[idx[k]];
      if (k + 1 < idx.size() && !(len >= 2.0 * (end[idx[k + 1]] - begin[idx[k + 1]])))
        ok = false;
      lo = std::max(lo, begin[idx[k]] - kappa * len);
      hi = std::min(hi, end[idx[k]] + kappa * len);
    }
    if (ok && lo <= hi) best = idx.size();
  }
  return best;
}

}  // namespace oracle

namespace oracle {

/// Radius R with (int chi(|x|/R)^2 |u|^2 dx)^{1/2} = target for the C^2
/// quintic bump chi (1 on [0,1/2], 0 on [1,inf)), by bisection.
template <class F>
double bump_mass_radius(int n, F u, double target, double lo, double hi) {
  const auto chi = [](double s) {
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    const double x = 2.0 * s - 1.0;
    return 1.0 - x * x * x * (6.0 * x * x - 15.0 * x + 10.0);
  };
  const auto mass = [&](double R) {
    return std::sqrt(radial_integral(n, [&](double r) {
      const double c = chi(r / R);
      return c * c * u(r) * u(r);
    }, R));
  };
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
