#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "scb/simd.hpp"

using namespace scb;

namespace {

struct backend_guard {
    simd::backend saved;
    backend_guard() : saved(simd::active_backend()) {}
    ~backend_guard() { simd::force_backend(saved); }
};

const simd::shape kShapes[] = {simd::shape::epanechnikov, simd::shape::rectangular,
                               simd::shape::triangular, simd::shape::quartic};

}  // namespace

TEST_CASE("backend detection names") {
    CHECK(simd::backend_supported(simd::backend::scalar));
    CHECK(std::string(simd::backend_name(simd::backend::scalar)) == "scalar");
    CHECK(std::string(simd::backend_name(simd::backend::avx2)) == "avx2");
}

TEST_CASE("avx2 variants match the scalar reference") {
    if (!simd::backend_supported(simd::backend::avx2)) {
        MESSAGE("avx2 unavailable on this cpu; equivalence not exercised");
        return;
    }
    backend_guard guard;
    std::mt19937_64 gen(20240917);
    std::uniform_real_distribution<double> ux(-3.0, 3.0);
    std::uniform_real_distribution<double> uw(-2.0, 2.0);

    for (simd::shape s : kShapes) {
        for (std::size_t len : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 1001u}) {
            std::vector<double> xs(len), ws(len);
            for (std::size_t i = 0; i < len; ++i) {
                xs[i] = ux(gen);
                ws[i] = uw(gen);
            }
            std::sort(xs.begin(), xs.end());
            double t = ux(gen);
            double inv_b = 1.0 / 0.37;

            double ref = simd::detail::kernel_sum_scalar(s, xs.data(), 0, len, t, inv_b);
            double ref_d = simd::detail::kernel_deriv_sum_scalar(s, xs.data(), 0, len, t, inv_b);
            auto ref_w =
                simd::detail::kernel_sum_weighted_scalar(s, xs.data(), ws.data(), 0, len, t, inv_b);

            double got = simd::detail::kernel_sum_avx2(s, xs.data(), 0, len, t, inv_b);
            double got_d = simd::detail::kernel_deriv_sum_avx2(s, xs.data(), 0, len, t, inv_b);
            auto got_w =
                simd::detail::kernel_sum_weighted_avx2(s, xs.data(), ws.data(), 0, len, t, inv_b);

            double scale = std::max(1.0, std::abs(ref));
            CHECK(std::abs(got - ref) <= 1e-11 * scale);
            CHECK(std::abs(got_d - ref_d) <= 1e-11 * std::max(1.0, std::abs(ref_d)));
            CHECK(std::abs(got_w.wsum - ref_w.wsum) <= 1e-11 * std::max(1.0, std::abs(ref_w.wsum)));
            CHECK(std::abs(got_w.wysum - ref_w.wysum) <=
                  1e-11 * std::max(1.0, std::abs(ref_w.wysum)));
        }
    }
}

TEST_CASE("support boundary handled identically by both backends") {
    if (!simd::backend_supported(simd::backend::avx2)) return;
    // points landing exactly on u in {-1, 0, 1}
    std::vector<double> xs = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (simd::shape s : kShapes) {
        double ref = simd::detail::kernel_sum_scalar(s, xs.data(), 0, xs.size(), 0.0, 1.0);
        double got = simd::detail::kernel_sum_avx2(s, xs.data(), 0, xs.size(), 0.0, 1.0);
        CHECK(got == doctest::Approx(ref).epsilon(1e-14));
        double ref_d = simd::detail::kernel_deriv_sum_scalar(s, xs.data(), 0, xs.size(), 0.0, 1.0);
        double got_d = simd::detail::kernel_deriv_sum_avx2(s, xs.data(), 0, xs.size(), 0.0, 1.0);
        CHECK(got_d == doctest::Approx(ref_d).epsilon(1e-14));
    }
}

TEST_CASE("empty and sub-lane windows") {
    std::vector<double> xs = {0.1, 0.2, 0.3};
    for (simd::shape s : kShapes) {
        CHECK(simd::kernel_sum(s, xs.data(), 2, 2, 0.0, 1.0) == 0.0);
        auto w = simd::kernel_sum_weighted(s, xs.data(), xs.data(), 1, 1, 0.0, 1.0);
        CHECK(w.wsum == 0.0);
        CHECK(w.wysum == 0.0);
    }
}

TEST_CASE("force_backend round-trips and rejects the unsupported") {
    backend_guard guard;
    simd::force_backend(simd::backend::scalar);
    CHECK(simd::active_backend() == simd::backend::scalar);
    if (simd::backend_supported(simd::backend::avx2)) {
        simd::force_backend(simd::backend::avx2);
        CHECK(simd::active_backend() == simd::backend::avx2);
    }
}
