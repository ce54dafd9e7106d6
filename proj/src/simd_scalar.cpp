#include "scb/simd.hpp"

#include <cmath>

// Scalar reference implementations. These define the semantics the AVX2
// variants are tested against; keep the support predicates identical between
// backends (u^2 <= 1 for smooth kernels, |u| <= 1 for rectangular).

namespace scb::simd::detail {

namespace {

inline double eval_shape(shape s, double u) {
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

inline double eval_shape_deriv(shape s, double u) {
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

double kernel_sum_scalar(shape s, const double* xs, std::size_t i0, std::size_t i1, double t,
                         double inv_b) {
    double acc = 0.0;
    for (std::size_t i = i0; i < i1; ++i) acc += eval_shape(s, (xs[i] - t) * inv_b);
    return acc;
}

sum_pair kernel_sum_weighted_scalar(shape s, const double* xs, const double* ws, std::size_t i0,
                                    std::size_t i1, double t, double inv_b) {
    double acc = 0.0, accw = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
        double k = eval_shape(s, (xs[i] - t) * inv_b);
        acc += k;
        accw += k * ws[i];
    }
    return {acc, accw};
}

double kernel_deriv_sum_scalar(shape s, const double* xs, std::size_t i0, std::size_t i1, double t,
                               double inv_b) {
    double acc = 0.0;
    for (std::size_t i = i0; i < i1; ++i) acc += eval_shape_deriv(s, (xs[i] - t) * inv_b);
    return acc;
}

}  // namespace scb::simd::detail
