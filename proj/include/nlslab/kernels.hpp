#pragma once

// Data-parallel inner loops. Every kernel exists twice: a serial reference
// in kernels::serial and an OpenMP version in kernels::parallel. The library
// calls the parallel versions; the serial ones are kept for tests and the
// benchmark.
//
// Row kernels (matvec) compute each output entry with the same instruction
// sequence in both versions, so serial and parallel results are bitwise
// identical. Reductions use a fixed block partition that does not depend on
// the thread count, so parallel results are reproducible run to run.

#include <complex>
#include <cstddef>
#include <span>

namespace nlslab::kernels {

using cplx = std::complex<double>;

// Block length for the reproducible reductions.
inline constexpr std::size_t reduction_block = 512;

namespace serial {

// y = A x, A dense row-major (rows x cols), real; x, y complex.
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const cplx> x, std::span<cplx> y);

// u_i <- exp(-i * coeff * |u_i|^exponent) u_i, with 0^exponent := 0.
void phase_rotate(std::span<cplx> u, double coeff, double exponent);

// u_i <- phase_i * u_i
void pointwise_multiply(std::span<cplx> u, std::span<const cplx> phase);

// sum_i w_i f_i
double weighted_sum(std::span<const double> w, std::span<const double> f);

// sum_i w_i |u_i|^p
double weighted_abs_pow_sum(std::span<const double> w, std::span<const cplx> u,
                            double p);

}  // namespace serial

namespace parallel {

void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const cplx> x, std::span<cplx> y);
void phase_rotate(std::span<cplx> u, double coeff, double exponent);
void pointwise_multiply(std::span<cplx> u, std::span<const cplx> phase);
double weighted_sum(std::span<const double> w, std::span<const double> f);
double weighted_abs_pow_sum(std::span<const double> w, std::span<const cplx> u,
                            double p);

}  // namespace parallel

// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int thread_count();

}  // namespace nlslab::kernels
