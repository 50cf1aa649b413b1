#include <cmath>
#include <numbers>

#include "doctest.h"

#include "nlslab/error.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/nls_dynamics.hpp"

using namespace nlslab;

namespace {

RadialField gaussian(const GridPtr& g, double amplitude = 1.0) {
  return RadialField::sample(g, [amplitude](double r) { return cplx(amplitude * std::exp(-r * r), 0.0); });
}

double l2_diff(const RadialField& a, const RadialField& b) {
  RadialField d = a;
  for (std::size_t i = 0; i < d.size(); ++i) d.values[i] -= b.values[i];
  return lp_norm(d, 2.0);
}

EvolutionConfig config(int n, double mu, double dt, std::size_t stride) {
  EvolutionConfig c;
  c.dimension = n;
  c.mu = mu;
  c.dt = dt;
  c.snapshot_stride = stride;
  return c;
}

const SpectralTransform& transform3() {
  static const SpectralTransform tr(make_grid(3, 512, 24.0));
  return tr;
}

}  // namespace

TEST_CASE("nonlinear phase step") {
  const auto g = make_grid(3, 64, 4.0);
  const RadialField u = RadialField::sample(g, [](double r) { return cplx(std::exp(-r), 0.5 * r); });
  const RadialField same = nonlinear_phase_step(u, 1.0, 0.0);
  CHECK(same.values == u.values);
  const RadialField v = nonlinear_phase_step(u, -1.0, 0.37);
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(std::abs(v.values[i]) == doctest::Approx(std::abs(u.values[i])).epsilon(1e-15));

  const auto g4 = make_grid(4, 32, 2.0);
  const RadialField one = RadialField::sample(g4, [](double) { return cplx(1.0, 0.0); });
  const RadialField minus = nonlinear_phase_step(one, 1.0, std::numbers::pi);
  for (const auto& z : minus.values) CHECK(std::abs(z + cplx(1.0, 0.0)) < 1e-15);

  RadialField bad = u;
  bad.values[2] = cplx(NAN, 0.0);
  CHECK_THROWS_AS(nonlinear_phase_step(bad, 1.0, 0.1), Error);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(config(3, 1.0, 1e-3, 10).validate());
  CHECK_THROWS_AS(config(2, 1.0, 1e-3, 10).validate(), Error);
  CHECK_THROWS_AS(config(3, 0.5, 1e-3, 10).validate(), Error);
  CHECK_THROWS_AS(config(3, 1.0, 0.0, 10).validate(), Error);
  CHECK_THROWS_AS(config(3, 1.0, 1e-3, 0).validate(), Error);
  const auto& tr = transform3();
  const RadialField u = gaussian(tr.grid());
  CHECK_THROWS_AS(evolve(tr, u, 0.0, 0.1, config(3, 1.0, 0.03, 1)), Error);
  CHECK_THROWS_AS(evolve(tr, u, 0.0, 0.0, config(3, 1.0, 0.01, 1)), Error);
  CHECK_THROWS_AS(evolve(tr, u, 0.0, 0.1, config(4, 1.0, 0.01, 1)), Error);
  try {
    const double beyond = 2.0 * tr.validated_horizon() + 1.0;
    evolve(tr, u, 0.0, beyond, config(3, 1.0, beyond, 1));
    FAIL("expected the horizon to be enforced");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::outside_validated_range);
  }
}

TEST_CASE("evolve: zero data, snapshots and mass") {
  const auto& tr = transform3();
  const Trajectory zero = evolve(tr, RadialField::zeros(tr.grid()), 0.0, 0.1, config(3, 1.0, 0.01, 2));
  CHECK(zero.status == RunStatus::complete);
  CHECK(zero.size() == 6);
  for (const auto& s : zero.snapshots)
    for (const auto& z : s.values) CHECK(z == cplx(0.0, 0.0));

  const Trajectory traj = evolve(tr, gaussian(tr.grid()), 0.0, 1.0, config(3, 1.0, 5e-3, 20));
  CHECK(traj.status == RunStatus::complete);
  REQUIRE(traj.size() == 11);
  CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
  const double m0 = lp_norm(traj.snapshots.front(), 2.0);
  for (const auto& s : traj.snapshots) CHECK(std::abs(lp_norm(s, 2.0) - m0) < 1e-10);

  CHECK(traj.index_of(0.5) == 5);
  try {
    (void)traj.index_of(0.55);
    FAIL("expected not_a_snapshot_time");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_a_snapshot_time);
  }
}

TEST_CASE("evolve: small amplitude follows the free flow") {
  const auto& tr = transform3();
  const RadialField u0 = gaussian(tr.grid(), 1e-3);
  const Trajectory traj = evolve(tr, u0, 0.0, 1.0, config(3, 1.0, 1e-2, 10));
  for (std::size_t i = 0; i < traj.size(); ++i)
    CHECK(l2_diff(traj.snapshots[i], free_evolve(tr, u0, traj.times[i])) < 1e-5);
}

TEST_CASE("evolve: second-order self-convergence") {
  const auto& tr = transform3();
  const RadialField u0 = gaussian(tr.grid());
  std::vector<RadialField> finals;
  for (double dt : {0.02, 0.01, 0.005})
    finals.push_back(evolve(tr, u0, 0.0, 0.5, config(3, 1.0, dt, 1)).snapshots.back());
  const double ratio = l2_diff(finals[0], finals[1]) / l2_diff(finals[1], finals[2]);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("evolve: energy alarm truncates the run") {
  const auto& tr = transform3();
  EvolutionConfig c = config(3, 1.0, 0.05, 1);
  c.energy_drift_alarm = 1e-14;
  const Trajectory traj = evolve(tr, gaussian(tr.grid(), 2.0), 0.0, 1.0, c);
  CHECK(traj.status == RunStatus::energy_alarm);
  CHECK(traj.size() < 21);
  CHECK_FALSE(traj.status_detail.empty());
}

TEST_CASE("duhamel residual") {
  const auto& tr = transform3();
  const Trajectory zero = evolve(tr, RadialField::zeros(tr.grid()), 0.0, 0.2, config(3, 1.0, 0.01, 5));
  CHECK(duhamel_residual(tr, zero, 0.0, 0.2) == 0.0);

  const Trajectory free = evolve(tr, gaussian(tr.grid()), 0.0, 1.0, config(3, 0.0, 0.01, 10));
  CHECK(duhamel_residual(tr, free, 0.0, 1.0) < 1e-9);
  CHECK(duhamel_residual(tr, free, 0.3, 0.7) < 1e-9);

  const Trajectory nl = evolve(tr, gaussian(tr.grid()), 0.0, 1.0, config(3, 1.0, 1e-3, 10));
  const double res = duhamel_residual(tr, nl, 0.0, 1.0);
  CHECK(res > 0.0);
  CHECK(res < 1e-3 * lp_norm(nl.snapshots.back(), 2.0));
  CHECK_THROWS_AS(duhamel_residual(tr, nl, 0.0, 0.1234), Error);
}

TEST_CASE("linear flows") {
  const auto& tr = transform3();
  const Trajectory nl = evolve(tr, gaussian(tr.grid()), 0.0, 0.5, config(3, 1.0, 0.01, 5));
  const auto [m0, p0] = linear_flows(tr, nl, 0.0);
  CHECK(m0.values == nl.snapshots.front().values);
  const auto [m1, p1] = linear_flows(tr, nl, 0.5);
  CHECK(p1.values == nl.snapshots.back().values);

  const Trajectory free = evolve(tr, gaussian(tr.grid()), 0.0, 0.5, config(3, 0.0, 0.01, 5));
  for (std::size_t i = 0; i < free.size(); ++i) {
    const auto [minus, plus] = linear_flows(tr, free, free.times[i]);
    CHECK(l2_diff(minus, free.snapshots[i]) < 1e-9);
    CHECK(l2_diff(plus, free.snapshots[i]) < 1e-9);
  }
}

TEST_CASE("blowup monitor") {
  const auto& tr = transform3();
  const Trajectory def = evolve(tr, gaussian(tr.grid()), 0.0, 1.0, config(3, 1.0, 1e-3, 50));
  const BlowupRecord d = blowup_monitor(tr, def);
  CHECK_FALSE(d.flagged);
  CHECK_FALSE(d.glassey_indicator);
  CHECK(d.gradient_norms.size() == def.size());

  const Trajectory free = evolve(tr, gaussian(tr.grid(), 3.0), 0.0, 1.0, config(3, 0.0, 1e-2, 10));
  CHECK_FALSE(blowup_monitor(tr, free).flagged);

  // Focusing data with potential above kinetic energy.
  EvolutionConfig c = config(3, -1.0, 1e-5, 10);
  c.blowup_gradient_factor = 1.5;
  const Trajectory foc = evolve(tr, gaussian(tr.grid(), 3.0), 0.0, 0.02, c);
  CHECK(foc.status == RunStatus::blowup);
  const BlowupRecord f = blowup_monitor(tr, foc);
  CHECK(f.glassey_indicator);
  CHECK(f.flagged);
  REQUIRE(f.alarm_time.has_value());
  CHECK(*f.alarm_time < tr.validated_horizon());
}
