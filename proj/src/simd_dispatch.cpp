#include "scb/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "scb/error.hpp"

namespace scb::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

backend detect() {
    if (const char* env = std::getenv("SCB_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return backend::avx2;
        return backend::scalar;
    }
    return cpu_has_avx2() ? backend::avx2 : backend::scalar;
}

std::atomic<backend>& state() {
    static std::atomic<backend> b{detect()};
    return b;
}

}  // namespace

const char* backend_name(backend b) { return b == backend::avx2 ? "avx2" : "scalar"; }

bool backend_supported(backend b) { return b == backend::scalar || cpu_has_avx2(); }

backend active_backend() { return state().load(std::memory_order_relaxed); }

void force_backend(backend b) {
    require(backend_supported(b), errc::domain_error,
            std::string("simd backend unavailable on this cpu: ") + backend_name(b));
    state().store(b, std::memory_order_relaxed);
}

double kernel_sum(shape s, const double* xs, std::size_t i0, std::size_t i1, double t,
                  double inv_b) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == backend::avx2)
        return detail::kernel_sum_avx2(s, xs, i0, i1, t, inv_b);
#endif
    return detail::kernel_sum_scalar(s, xs, i0, i1, t, inv_b);
}

sum_pair kernel_sum_weighted(shape s, const double* xs, const double* ws, std::size_t i0,
                             std::size_t i1, double t, double inv_b) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == backend::avx2)
        return detail::kernel_sum_weighted_avx2(s, xs, ws, i0, i1, t, inv_b);
#endif
    return detail::kernel_sum_weighted_scalar(s, xs, ws, i0, i1, t, inv_b);
}

double kernel_deriv_sum(shape s, const double* xs, std::size_t i0, std::size_t i1, double t,
                        double inv_b) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == backend::avx2)
        return detail::kernel_deriv_sum_avx2(s, xs, i0, i1, t, inv_b);
#endif
    return detail::kernel_deriv_sum_scalar(s, xs, i0, i1, t, inv_b);
}

}  // namespace scb::simd
