#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "nlslab/error.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/radial_domain.hpp"
#include "nlslab/spectral_transform.hpp"

using namespace nlslab;
using std::numbers::pi;

namespace {

std::vector<double> real_samples(const GridPtr& g, double (*f)(double)) {
  std::vector<double> out;
  for (double r : g->nodes()) out.push_back(f(r));
  return out;
}

RadialField gaussian(const GridPtr& g, double width = 1.0) {
  return RadialField::sample(g, [width](double r) { return cplx(std::exp(-r * r / (width * width)), 0.0); });
}

}  // namespace

TEST_CASE("grid nodes increase and weights are positive") {
  for (int n = 3; n <= 8; ++n) {
    const auto g = make_grid(n, 64, 4.0);
    CHECK(g->nodes().front() >= 0.0);
    for (std::size_t i = 1; i < g->size(); ++i) CHECK(g->nodes()[i] > g->nodes()[i - 1]);
    for (double w : g->weights()) CHECK(w > 0.0);
    CHECK(g->sphere_area() == doctest::Approx(oracle::sphere_area(n)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(make_grid(2, 64, 4.0), Error);
  CHECK_THROWS_AS(make_grid(3, 2, 4.0), Error);
  CHECK_THROWS_AS(make_grid(3, 64, -1.0), Error);
}

TEST_CASE("exponent arithmetic") {
  CHECK(nonlinearity_power(3) == 4.0);
  CHECK(critical_exponent(3) == 6.0);
  CHECK(spacetime_exponent(3) == 10.0);
  CHECK(nonlinearity_power(4) == 2.0);
  CHECK(critical_exponent(6) == 3.0);
}

TEST_CASE("integrate: zero, Gaussian and exponential moments") {
  const auto g = make_grid(3, 512, 8.0);
  CHECK(integrate(*g, std::vector<double>(g->size(), 0.0)) == 0.0);
  const double gauss = integrate(*g, real_samples(g, [](double r) { return std::exp(-r * r); }));
  CHECK(std::abs(gauss - std::pow(pi, 1.5)) < 1e-8);

  const auto wide = make_grid(3, 4096, 40.0);
  const double expo = integrate(*wide, real_samples(wide, [](double r) { return std::exp(-r); }));
  CHECK(std::abs(expo - 8.0 * pi) < 1e-6);

  // Higher dimensions against adaptive quadrature.
  for (int n = 4; n <= 8; ++n) {
    const auto gn = make_grid(n, 512, 8.0);
    const double v = integrate(*gn, real_samples(gn, [](double r) { return std::exp(-r * r); }));
    const double ref = oracle::radial_integral(n, [](double r) { return std::exp(-r * r); }, 8.0);
    CHECK(std::abs(v - ref) < 1e-8 * ref);
  }

  std::vector<double> bad(g->size(), 1.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(integrate(*g, bad), Error);
  CHECK_THROWS_AS(integrate(*g, std::vector<double>(3, 1.0)), Error);
}

TEST_CASE("lp_norm") {
  const auto g = make_grid(3, 512, 8.0);
  CHECK(lp_norm(RadialField::zeros(g), 2.0) == 0.0);
  const RadialField u = gaussian(g);
  CHECK(std::abs(lp_norm(u, 2.0) - std::pow(pi / 2.0, 0.75)) < 1e-8);
  // Cell-centred nodes never sit at r = 0; the sup is attained at the first node.
  CHECK(lp_norm(u, INFINITY) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(lp_norm(u, 0.5), Error);
}

TEST_CASE("radial_laplacian: constants, r^2 and a Gaussian") {
  for (int n = 3; n <= 6; ++n) {
    const auto g = make_grid(n, 128, 4.0);
    const auto c = radial_laplacian(RadialField::sample(g, [](double) { return cplx(2.5, -1.0); }));
    for (std::size_t i = 0; i + 1 < g->size(); ++i) CHECK(std::abs(c.values[i]) == 0.0);
    const auto q = radial_laplacian(RadialField::sample(g, [](double r) { return cplx(r * r, 0.0); }));
    for (std::size_t i = 0; i + 1 < g->size(); ++i)
      CHECK(std::abs(q.values[i] - cplx(2.0 * n, 0.0)) < 1e-10);
  }
  // Second order: the error drops by ~4 per halving of h.
  double prev = 0.0;
  for (std::size_t N : {128u, 256u, 512u}) {
    const auto g = make_grid(5, N, 8.0);
    const auto lap = radial_laplacian(gaussian(g));
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < g->size(); ++i) {
      const double r = g->nodes()[i];
      err = std::max(err, std::abs(lap.values[i].real() - (4 * r * r - 10) * std::exp(-r * r)));
    }
    const double h = g->spacing();
    CHECK(err < 10.0 * h * h);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
    prev = err;
  }
  CHECK_THROWS_AS(radial_laplacian(RadialField::zeros(nullptr)), Error);
}

TEST_CASE("radial_derivative is high order") {
  const auto g = make_grid(3, 256, 8.0);
  const auto d = radial_derivative(gaussian(g));
  double err = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = g->nodes()[i];
    err = std::max(err, std::abs(d[i].real() + 2 * r * std::exp(-r * r)));
  }
  CHECK(err < 1e-9);
}

TEST_CASE("rescale: identity, energy and critical-norm invariance") {
  const auto g = make_grid(3, 1024, 32.0);
  const SpectralTransform tr(g);
  const RadialField u = gaussian(g);
  const auto same = rescale(u, 1.0);
  CHECK_FALSE(same.truncated);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(same.field.values[i] - u.values[i]) < 1e-15);

  const double k0 = energy(tr, u, 0.0).kinetic;
  const double c0 = lp_norm(u, critical_exponent(3));
  for (double lambda : {0.5, 0.75, 1.5, 2.0}) {
    const auto v = rescale(u, lambda);
    CHECK_FALSE(v.truncated);
    CHECK(std::abs(energy(tr, v.field, 0.0).kinetic - k0) < 1e-6 * k0);
    CHECK(std::abs(lp_norm(v.field, critical_exponent(3)) - c0) < 1e-6 * c0);
  }
  CHECK(rescale(u, 40.0).truncated);
  CHECK_THROWS_AS(rescale(u, 0.0), Error);
}

TEST_CASE("boundary decay ratio") {
  const auto g = make_grid(3, 256, 8.0);
  CHECK(boundary_decay_ratio(gaussian(g)) < 1e-20);
  CHECK(boundary_decay_ratio(RadialField::sample(g, [](double) { return cplx(1.0, 0.0); })) ==
        doctest::Approx(1.0));
}
