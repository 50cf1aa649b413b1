#include "nlslab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nlslab::kernels {

namespace {

struct SplitVector {
  std::vector<double> re;
  std::vector<double> im;
};

SplitVector split(std::span<const cplx> x) {
  SplitVector s{std::vector<double>(x.size()), std::vector<double>(x.size())};
  for (std::size_t j = 0; j < x.size(); ++j) {
    s.re[j] = x[j].real();
    s.im[j] = x[j].imag();
  }
  return s;
}

// Shared by both versions so that results agree bit for bit.
inline cplx row_dot(const double* row, const double* xr, const double* xi,
                    std::size_t cols) {
  double sr = 0.0;
  double si = 0.0;
#pragma omp simd reduction(+ : sr, si)
  for (std::size_t j = 0; j < cols; ++j) {
    sr += row[j] * xr[j];
    si += row[j] * xi[j];
  }
  return {sr, si};
}

inline cplx rotate(cplx u, double coeff, double exponent) {
  const double m = std::abs(u);
  if (m == 0.0) return u;
  const double theta = -coeff * std::pow(m, exponent);
  return u * cplx(std::cos(theta), std::sin(theta));
}

inline double block_abs_pow(const double* w, const cplx* u, std::size_t n,
                            double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::abs(u[i]);
    if (m != 0.0) s += w[i] * std::pow(m, p);
  }
  return s;
}

inline double block_dot(const double* w, const double* f, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * f[i];
  return s;
}

template <class BlockFn>
double blocked_reduce(std::size_t n, BlockFn&& fn) {
  const std::size_t blocks = (n + reduction_block - 1) / reduction_block;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * reduction_block;
    const std::size_t len = std::min(reduction_block, n - lo);
    partial[static_cast<std::size_t>(b)] = fn(lo, len);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

namespace serial {

void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const cplx> x, std::span<cplx> y) {
  const SplitVector s = split(x);
  for (std::size_t i = 0; i < rows; ++i)
    y[i] = row_dot(a.data() + i * cols, s.re.data(), s.im.data(), cols);
}

void phase_rotate(std::span<cplx> u, double coeff, double exponent) {
  for (auto& v : u) v = rotate(v, coeff, exponent);
}

void pointwise_multiply(std::span<cplx> u, std::span<const cplx> phase) {
  for (std::size_t i = 0; i < u.size(); ++i) u[i] *= phase[i];
}

double weighted_sum(std::span<const double> w, std::span<const double> f) {
  return block_dot(w.data(), f.data(), w.size());
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const cplx> u,
                            double p) {
  return block_abs_pow(w.data(), u.data(), w.size(), p);
}

}  // namespace serial

namespace parallel {

void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const cplx> x, std::span<cplx> y) {
  const SplitVector s = split(x);
  const auto nr = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nr; ++i) {
    const auto r = static_cast<std::size_t>(i);
    y[r] = row_dot(a.data() + r * cols, s.re.data(), s.im.data(), cols);
  }
}

void phase_rotate(std::span<cplx> u, double coeff, double exponent) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& v = u[static_cast<std::size_t>(i)];
    v = rotate(v, coeff, exponent);
  }
}

void pointwise_multiply(std::span<cplx> u, std::span<const cplx> phase) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    u[static_cast<std::size_t>(i)] *= phase[static_cast<std::size_t>(i)];
}

double weighted_sum(std::span<const double> w, std::span<const double> f) {
  return blocked_reduce(w.size(), [&](std::size_t lo, std::size_t len) {
    return block_dot(w.data() + lo, f.data() + lo, len);
  });
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const cplx> u,
                            double p) {
  return blocked_reduce(w.size(), [&](std::size_t lo, std::size_t len) {
    return block_abs_pow(w.data() + lo, u.data() + lo, len, p);
  });
}

}  // namespace parallel

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace nlslab::kernels
