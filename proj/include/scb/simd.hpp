#pragma once

// Runtime-dispatched inner loops for kernel-weighted sums over sorted data
// windows. Every primitive has a scalar reference implementation and an AVX2
// variant; the active backend is chosen once per process (overridable with
// SCB_SIMD=scalar|avx2 or force_backend()). The two backends accumulate in
// different orders, so they agree to roundoff, not bitwise; equivalence is
// pinned by tests/test_simd.cpp.

#include <cstddef>

namespace scb::simd {

enum class backend { scalar, avx2 };

// Built-in kernel shapes on the base support [-1, 1]:
//   epanechnikov 0.75(1-u^2), rectangular 0.5, triangular 1-|u|,
//   quartic (15/16)(1-u^2)^2.
enum class shape { epanechnikov, rectangular, triangular, quartic };

const char* backend_name(backend b);
bool backend_supported(backend b);
backend active_backend();
// Test hook; throws domain_error if unsupported on this CPU.
void force_backend(backend b);

struct sum_pair {
    double wsum;   // sum of K(u_i)
    double wysum;  // sum of K(u_i) * w_i
};

// All take u_i = (xs[i] - t) * inv_b for i in [i0, i1) and evaluate the shape
// on the base support; the caller handles kernel scaling and normalization.
double kernel_sum(shape s, const double* xs, std::size_t i0, std::size_t i1, double t, double inv_b);
sum_pair kernel_sum_weighted(shape s, const double* xs, const double* ws, std::size_t i0,
                             std::size_t i1, double t, double inv_b);
// Sum of K'(u_i); K' taken as 0 outside the open support and at triangular's kink.
double kernel_deriv_sum(shape s, const double* xs, std::size_t i0, std::size_t i1, double t,
                        double inv_b);

namespace detail {
double kernel_sum_scalar(shape s, const double* xs, std::size_t i0, std::size_t i1, double t, double inv_b);
sum_pair kernel_sum_weighted_scalar(shape s, const double* xs, const double* ws, std::size_t i0,
                                    std::size_t i1, double t, double inv_b);
double kernel_deriv_sum_scalar(shape s, const double* xs, std::size_t i0, std::size_t i1, double t,
                               double inv_b);
#if defined(__x86_64__) || defined(_M_X64)
double kernel_sum_avx2(shape s, const double* xs, std::size_t i0, std::size_t i1, double t, double inv_b);
sum_pair kernel_sum_weighted_avx2(shape s, const double* xs, const double* ws, std::size_t i0,
                                  std::size_t i1, double t, double inv_b);
double kernel_deriv_sum_avx2(shape s, const double* xs, std::size_t i0, std::size_t i1, double t,
                             double inv_b);
#endif
}  // namespace detail

}  // namespace scb::simd
