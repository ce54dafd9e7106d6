#include <doctest.h>

#include <cmath>
#include <vector>

#include "scb/error.hpp"
#include "scb/kernel.hpp"
#include "scb/quadrature.hpp"

using namespace scb;

namespace {

const char* kBuiltins[] = {"epanechnikov", "rect", "triangular", "quartic"};

std::vector<double> table_grid(double A, int m) {
    std::vector<double> u(m);
    for (int i = 0; i < m; ++i) u[i] = -A + 2.0 * A * i / (m - 1);
    return u;
}

}  // namespace

TEST_CASE("quadrature sanity") {
    CHECK(std::abs(integrate([](double x) { return x * x; }, 0, 1) - 1.0 / 3.0) < 1e-14);
    CHECK(std::abs(integrate([](double x) { return std::exp(x); }, -1, 2) -
                   (std::exp(2.0) - std::exp(-1.0))) < 1e-12);
    CHECK(integrate([](double) { return 1.0; }, 2, 2) == 0.0);
    // narrow spike resolved by adaptivity
    double spike = integrate([](double x) { return std::exp(-1e4 * x * x); }, -1, 1, 1e-13);
    CHECK(std::abs(spike - std::sqrt(3.141592653589793 / 1e4)) < 1e-10);
}

TEST_CASE("kernel evaluation examples") {
    kernel_profile epan = kernel_by_name("epanechnikov");
    CHECK(epan.evaluate(0.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(epan.evaluate(2.0) == 0.0);
    CHECK(epan.evaluate(-2.0) == 0.0);
    kernel_profile tri = kernel_by_name("triangular");
    CHECK(tri.evaluate(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    kernel_profile rect = kernel_by_name("rect");
    CHECK(rect.evaluate(1.0) == 0.5);
    CHECK(rect.evaluate(1.0000001) == 0.0);
}

TEST_CASE("built-in closed-form constants") {
    struct row {
        const char* name;
        double lambda, K1, K2, psi;
        int alpha;
        double C0;
    };
    const row expected[] = {
        {"epanechnikov", 0.6, 0.0, 1.25, 0.1, 2, 1.25},
        {"rect", 0.5, 0.5, 0.0, 1.0 / 6.0, 1, 0.5},
        {"triangular", 2.0 / 3.0, 0.0, 1.5, 1.0 / 12.0, 2, 1.5},
        {"quartic", 5.0 / 7.0, 0.0, 1.5, 1.0 / 14.0, 2, 1.5},
    };
    for (const row& r : expected) {
        CAPTURE(r.name);
        kernel_profile k = kernel_by_name(r.name);
        CHECK(k.lambda_K == doctest::Approx(r.lambda).epsilon(1e-15));
        CHECK(k.K1 == doctest::Approx(r.K1).epsilon(1e-15));
        CHECK(k.K2 == doctest::Approx(r.K2).epsilon(1e-15));
        CHECK(k.psi_K == doctest::Approx(r.psi).epsilon(1e-15));
        CHECK(k.alpha == r.alpha);
        CHECK(k.C0 == doctest::Approx(r.C0).epsilon(1e-15));
    }
}

TEST_CASE("quadrature agrees with closed forms to 1e-9") {
    for (const char* name : kBuiltins) {
        CAPTURE(name);
        kernel_profile k = kernel_by_name(name);
        kernel_constants c = quadrature_constants(k);
        CHECK(std::abs(c.mass - 1.0) < 1e-9);
        CHECK(std::abs(c.lambda_K - k.lambda_K) < 1e-9);
        CHECK(std::abs(c.K1 - k.K1) < 1e-9);
        CHECK(std::abs(c.K2 - k.K2) < 1e-9);
        CHECK(std::abs(c.psi_K - k.psi_K) < 1e-9);
    }
}

TEST_CASE("NotAKernel rejections") {
    CHECK_THROWS_AS((void)kernel_by_name("gaussian"), error);
    CHECK_THROWS_AS((void)kernel_by_name("tricube"), error);
    try {
        (void)kernel_by_name("gaussian");
    } catch (const error& e) {
        CHECK(e.code() == errc::not_a_kernel);
        CHECK(e.exit_code() == 2);
    }

    // mass far from 1
    auto u = table_grid(1.0, 101);
    std::vector<double> half(101, 0.25);
    CHECK_THROWS_AS((void)make_table_kernel("half", u, half, 1.0), error);

    // negative values
    std::vector<double> neg(101, 0.5);
    neg[50] = -0.5;
    CHECK_THROWS_AS((void)make_table_kernel("neg", u, neg, 1.0), error);
}

TEST_CASE("custom table kernel reproduces the triangular constants") {
    auto u = table_grid(1.0, 2001);
    std::vector<double> k(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) k[i] = std::max(0.0, 1.0 - std::abs(u[i]));
    kernel_profile tab = make_table_kernel("tri_table", u, k, 1.0);
    CHECK(std::abs(tab.lambda_K - 2.0 / 3.0) < 1e-9);
    CHECK(std::abs(tab.psi_K - 1.0 / 12.0) < 1e-9);
    CHECK(std::abs(tab.K1 - 0.0) < 1e-9);
    // K2 from central differences; the kink at 0 and the edge trim cost a bit
    CHECK(std::abs(tab.K2 - 1.5) < 1e-2);
    CHECK(tab.alpha == 2);
    CHECK(tab.evaluate(0.25) == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(tab.evaluate(1.5) == 0.0);
}

TEST_CASE("kernel autocorrelation") {
    SUBCASE("r(0) = 1 for every builtin") {
        for (const char* name : kBuiltins)
            CHECK(kernel_autocorr(kernel_by_name(name), 0.0) ==
                  doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("rectangular overlap r(s) = 1 - |s|/2") {
        kernel_profile rect = kernel_by_name("rect");
        CHECK(kernel_autocorr(rect, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(kernel_autocorr(rect, 0.25) == doctest::Approx(0.875).epsilon(1e-10));
    }
    SUBCASE("even and compactly supported") {
        for (const char* name : kBuiltins) {
            kernel_profile k = kernel_by_name(name);
            CHECK(kernel_autocorr(k, 0.3) ==
                  doctest::Approx(kernel_autocorr(k, -0.3)).epsilon(1e-12));
            CHECK(kernel_autocorr(k, 2.0 * k.A) == 0.0);
            CHECK(kernel_autocorr(k, 2.0 * k.A + 0.5) == 0.0);
        }
    }
    SUBCASE("epanechnikov small-s limit recovers C0") {
        kernel_profile epan = kernel_by_name("epanechnikov");
        double r = kernel_autocorr(epan, 0.01);
        CHECK((1.0 - r) / (0.01 * 0.01) == doctest::Approx(1.25).epsilon(0.02));
    }
    SUBCASE("expansion 1 - C0 |s|^alpha + o(|s|^alpha)") {
        const double ss[] = {0.01, 0.005, 0.0025};
        for (const char* name : kBuiltins) {
            CAPTURE(name);
            kernel_profile k = kernel_by_name(name);
            double prev = 1e300;
            for (double s : ss) {
                double r = kernel_autocorr(k, s);
                double err =
                    std::abs(1.0 - r - k.C0 * std::pow(s, k.alpha)) / std::pow(s, k.alpha);
                CHECK(err <= 0.05);
                CHECK(err <= prev + 1e-9);
                prev = err;
            }
        }
    }
}

TEST_CASE("scaling (1/c) K(u/c) with c = 2 on the rectangular kernel") {
    kernel_profile rect = kernel_by_name("rect");
    kernel_profile wide = scale_kernel(rect, 2.0);
    CHECK(wide.A == doctest::Approx(2.0));
    CHECK(wide.lambda_K == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(wide.psi_K == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
    CHECK(wide.K1 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(wide.evaluate(1.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(wide.evaluate(2.5) == 0.0);
    kernel_constants c = quadrature_constants(wide);
    CHECK(std::abs(c.mass - 1.0) < 1e-9);
    CHECK(std::abs(c.lambda_K - wide.lambda_K) < 1e-9);
    CHECK(std::abs(c.K1 - wide.K1) < 1e-9);
    CHECK(std::abs(c.psi_K - wide.psi_K) < 1e-9);
}

TEST_CASE("kernel cdf and inverse cdf round-trip") {
    for (const char* name : kBuiltins) {
        CAPTURE(name);
        kernel_profile k = kernel_by_name(name);
        for (double p : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
            double x = k.inverse_cdf(p);
            CHECK(std::abs(k.cdf(x) - p) < 1e-10);
        }
        CHECK(std::abs(k.inverse_cdf(0.5)) < 1e-9);
    }
}
