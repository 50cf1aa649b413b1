// Serial reference kernels against their OpenMP versions at transform sizes.

#include <complex>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "nlslab/kernels.hpp"
#include "nlslab/radial_domain.hpp"
#include "nlslab/spectral_transform.hpp"

namespace k = nlslab::kernels;
using k::cplx;

namespace {

struct Data {
  std::vector<double> matrix, weights;
  std::vector<cplx> x, phase;

  Data(std::size_t n, bool with_matrix)
      : matrix(with_matrix ? n * n : 0), weights(n), x(n), phase(n) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& a : matrix) a = u(rng);
    for (auto& w : weights) w = u(rng) + 1.0;
    for (auto& z : x) z = {u(rng), u(rng)};
    for (auto& z : phase) z = std::polar(1.0, u(rng));
  }
};

template <bool Parallel>
void matvec(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Data d(n, true);
  std::vector<cplx> y(n);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::parallel::matvec(d.matrix, n, n, d.x, y);
    else
      k::serial::matvec(d.matrix, n, n, d.x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
  state.counters["threads"] = Parallel ? k::thread_count() : 1;
}

template <bool Parallel>
void phase_rotate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Data d(n, false);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::parallel::phase_rotate(d.x, 1e-3, 4.0);
    else
      k::serial::phase_rotate(d.x, 1e-3, 4.0);
    benchmark::DoNotOptimize(d.x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <bool Parallel>
void abs_pow_sum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Data d(n, false);
  for (auto _ : state) {
    double s = Parallel ? k::parallel::weighted_abs_pow_sum(d.weights, d.x, 10.0)
                        : k::serial::weighted_abs_pow_sum(d.weights, d.x, 10.0);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

// One full linear step through the library (parallel kernels).
void free_step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const nlslab::SpectralTransform tr(nlslab::make_grid(3, n, 32.0));
  const auto phases = tr.free_phases(1e-3);
  auto u = nlslab::RadialField::sample(tr.grid(), [](double r) { return cplx(std::exp(-r * r), 0.0); }).values;
  for (auto _ : state) {
    tr.propagate_in_place(u, phases);
    benchmark::DoNotOptimize(u.data());
  }
}

}  // namespace

BENCHMARK(matvec<false>)->Name("matvec/serial")->Arg(512)->Arg(1024)->Arg(2048);
BENCHMARK(matvec<true>)->Name("matvec/parallel")->Arg(512)->Arg(1024)->Arg(2048);
BENCHMARK(phase_rotate<false>)->Name("phase_rotate/serial")->Arg(1024)->Arg(1 << 16);
BENCHMARK(phase_rotate<true>)->Name("phase_rotate/parallel")->Arg(1024)->Arg(1 << 16);
BENCHMARK(abs_pow_sum<false>)->Name("abs_pow_sum/serial")->Arg(1024)->Arg(1 << 16);
BENCHMARK(abs_pow_sum<true>)->Name("abs_pow_sum/parallel")->Arg(1024)->Arg(1 << 16);
BENCHMARK(free_step)->Arg(512)->Arg(1024);

BENCHMARK_MAIN();
