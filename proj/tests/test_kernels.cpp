#include <cmath>
#include <random>

#include "doctest.h"

#include "nlslab/kernels.hpp"

using namespace nlslab;
using kernels::cplx;

namespace {

std::vector<cplx> random_complex(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& z : v) z = {d(rng), d(rng)};
  return v;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree") {
  // One block: both versions perform the identical sequential sum.
  constexpr std::size_t reduction_block_check = kernels::reduction_block;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t n : {1u, 7u, 511u, 512u, 513u, 3000u}) {
    CAPTURE(n);
    const std::size_t rows = n, cols = n;
    std::vector<double> a(rows * cols);
    for (auto& x : a) x = unit(rng) - 0.5;
    const auto x = random_complex(rng, cols);
    if (n <= 1024) {
      std::vector<cplx> ys(rows), yp(rows);
      kernels::serial::matvec(a, rows, cols, x, ys);
      kernels::parallel::matvec(a, rows, cols, x, yp);
      CHECK(ys == yp);
    }

    auto us = x, up = x;
    kernels::serial::phase_rotate(us, 0.3, 4.0);
    kernels::parallel::phase_rotate(up, 0.3, 4.0);
    CHECK(us == up);

    const auto phase = random_complex(rng, n);
    kernels::serial::pointwise_multiply(us, phase);
    kernels::parallel::pointwise_multiply(up, phase);
    CHECK(us == up);

    std::vector<double> w(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = unit(rng);
      f[i] = unit(rng) - 0.5;
    }
    // Reductions: same value up to summation order, and reproducible.
    const double ss = kernels::serial::weighted_sum(w, f);
    const double ps = kernels::parallel::weighted_sum(w, f);
    CHECK(std::abs(ss - ps) <= 1e-13 * kernels::serial::weighted_sum(w, std::vector<double>(n, 1.0)));
    CHECK(ps == kernels::parallel::weighted_sum(w, f));
    const double sp = kernels::serial::weighted_abs_pow_sum(w, x, 6.0);
    const double pp = kernels::parallel::weighted_abs_pow_sum(w, x, 6.0);
    CHECK(std::abs(sp - pp) <= 1e-13 * sp);
    CHECK(pp == kernels::parallel::weighted_abs_pow_sum(w, x, 6.0));
    if (n <= reduction_block_check) CHECK(ss == ps);
  }
  CHECK(kernels::thread_count() >= 1);
}

TEST_CASE("phase rotation preserves modulus and fixes zero") {
  std::vector<cplx> u = {{0.0, 0.0}, {1.0, 0.0}, {0.3, -0.4}};
  const auto before = u;
  kernels::serial::phase_rotate(u, 1.7, 1.5);
  CHECK(u[0] == cplx(0.0, 0.0));
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(std::abs(u[i]) == doctest::Approx(std::abs(before[i])).epsilon(1e-15));
}
