#include "scb/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

// AVX2/FMA variants via function target attributes; no special compile flags
// needed and non-x86 builds skip this TU entirely. Vector body in steps of 4
// with a scalar tail, one accumulator, horizontal add at the end.

#define SCB_AVX2 __attribute__((target("avx2,fma")))

namespace scb::simd::detail {

namespace {

SCB_AVX2 inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// K(u) for a lane of 4; support predicates mirror the scalar reference.
SCB_AVX2 inline __m256d eval_lane(shape s, __m256d u) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    switch (s) {
        case shape::epanechnikov: {
            __m256d t = _mm256_fnmadd_pd(u, u, one);  // 1 - u^2
            t = _mm256_max_pd(t, zero);
            return _mm256_mul_pd(_mm256_set1_pd(0.75), t);
        }
        case shape::rectangular: {
            __m256d au = _mm256_andnot_pd(_mm256_set1_pd(-0.0), u);
            __m256d mask = _mm256_cmp_pd(au, one, _CMP_LE_OQ);
            return _mm256_and_pd(mask, _mm256_set1_pd(0.5));
        }
        case shape::triangular: {
            __m256d au = _mm256_andnot_pd(_mm256_set1_pd(-0.0), u);
            return _mm256_max_pd(_mm256_sub_pd(one, au), zero);
        }
        case shape::quartic: {
            __m256d t = _mm256_fnmadd_pd(u, u, one);
            t = _mm256_max_pd(t, zero);
            return _mm256_mul_pd(_mm256_set1_pd(0.9375), _mm256_mul_pd(t, t));
        }
    }
    return zero;
}

SCB_AVX2 inline __m256d eval_lane_deriv(shape s, __m256d u) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    switch (s) {
        case shape::epanechnikov: {
            __m256d u2 = _mm256_mul_pd(u, u);
            __m256d mask = _mm256_cmp_pd(u2, one, _CMP_LE_OQ);
            return _mm256_and_pd(mask, _mm256_mul_pd(_mm256_set1_pd(-1.5), u));
        }
        case shape::rectangular:
            return zero;
        case shape::triangular: {
            __m256d signbit = _mm256_set1_pd(-0.0);
            __m256d au = _mm256_andnot_pd(signbit, u);
            __m256d inside = _mm256_cmp_pd(au, one, _CMP_LT_OQ);
            __m256d nonzero = _mm256_cmp_pd(u, zero, _CMP_NEQ_OQ);
            // -sign(u): -1 with u's sign bit flipped in
            __m256d val = _mm256_or_pd(_mm256_and_pd(u, signbit), one);
            val = _mm256_sub_pd(zero, val);
            return _mm256_and_pd(_mm256_and_pd(inside, nonzero), val);
        }
        case shape::quartic: {
            __m256d t = _mm256_fnmadd_pd(u, u, one);
            __m256d mask = _mm256_cmp_pd(t, zero, _CMP_GT_OQ);
            __m256d val = _mm256_mul_pd(_mm256_set1_pd(-3.75), _mm256_mul_pd(u, t));
            return _mm256_and_pd(mask, val);
        }
    }
    return zero;
}

inline double eval_scalar(shape s, double u) {
    switch (s) {
        case shape::epanechnikov: {
            double t = 1.0 - u * u;
            return t > 0.0 ? 0.75 * t : 0.0;
        }
        case shape::rectangular:
            return std::abs(u) <= 1.0 ? 0.5 : 0.0;
        case shape::triangular: {
            double t = 1.0 - std::abs(u);
            return t > 0.0 ? t : 0.0;
        }
        case shape::quartic: {
            double t = 1.0 - u * u;
            if (t <= 0.0) return 0.0;
            return 0.9375 * t * t;
        }
    }
    return 0.0;
}

inline double eval_scalar_deriv(shape s, double u) {
    switch (s) {
        case shape::epanechnikov:
            return u * u <= 1.0 ? -1.5 * u : 0.0;
        case shape::rectangular:
            return 0.0;
        case shape::triangular: {
            double a = std::abs(u);
            if (a >= 1.0 || u == 0.0) return 0.0;
            return u > 0.0 ? -1.0 : 1.0;
        }
        case shape::quartic: {
            double t = 1.0 - u * u;
            return t > 0.0 ? -3.75 * u * t : 0.0;
        }
    }
    return 0.0;
}

}  // namespace

SCB_AVX2 double kernel_sum_avx2(shape s, const double* xs, std::size_t i0, std::size_t i1, double t,
                                double inv_b) {
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d vib = _mm256_set1_pd(inv_b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0;
    for (; i + 4 <= i1; i += 4) {
        __m256d x = _mm256_loadu_pd(xs + i);
        __m256d u = _mm256_mul_pd(_mm256_sub_pd(x, vt), vib);
        acc = _mm256_add_pd(acc, eval_lane(s, u));
    }
    double sum = hsum(acc);
    for (; i < i1; ++i) sum += eval_scalar(s, (xs[i] - t) * inv_b);
    return sum;
}

SCB_AVX2 sum_pair kernel_sum_weighted_avx2(shape s, const double* xs, const double* ws,
                                           std::size_t i0, std::size_t i1, double t, double inv_b) {
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d vib = _mm256_set1_pd(inv_b);
    __m256d acc = _mm256_setzero_pd();
    __m256d accw = _mm256_setzero_pd();
    std::size_t i = i0;
    for (; i + 4 <= i1; i += 4) {
        __m256d x = _mm256_loadu_pd(xs + i);
        __m256d w = _mm256_loadu_pd(ws + i);
        __m256d u = _mm256_mul_pd(_mm256_sub_pd(x, vt), vib);
        __m256d k = eval_lane(s, u);
        acc = _mm256_add_pd(acc, k);
        accw = _mm256_fmadd_pd(k, w, accw);
    }
    double sum = hsum(acc);
    double sumw = hsum(accw);
    for (; i < i1; ++i) {
        double k = eval_scalar(s, (xs[i] - t) * inv_b);
        sum += k;
        sumw += k * ws[i];
    }
    return {sum, sumw};
}

SCB_AVX2 double kernel_deriv_sum_avx2(shape s, const double* xs, std::size_t i0, std::size_t i1,
                                      double t, double inv_b) {
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d vib = _mm256_set1_pd(inv_b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0;
    for (; i + 4 <= i1; i += 4) {
        __m256d x = _mm256_loadu_pd(xs + i);
        __m256d u = _mm256_mul_pd(_mm256_sub_pd(x, vt), vib);
        acc = _mm256_add_pd(acc, eval_lane_deriv(s, u));
    }
    double sum = hsum(acc);
    for (; i < i1; ++i) sum += eval_scalar_deriv(s, (xs[i] - t) * inv_b);
    return sum;
}

}  // namespace scb::simd::detail

#endif  // x86_64
