#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "scb/asymptotics.hpp"
#include "scb/error.hpp"
#include "scb/processes.hpp"

using namespace scb;

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
    double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return acc / static_cast<double>(v.size());
}

double lag1_autocorr(const std::vector<double>& v) {
    double m = mean_of(v);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) num += (v[i] - m) * (v[i + 1] - m);
    for (double x : v) den += (x - m) * (x - m);
    return num / den;
}

}  // namespace

TEST_CASE("linear process generator") {
    std::vector<double> iid = gen_linear(std::vector<double>{1.0}, 50000, innovation::normal, 2);
    double v = var_of(iid);
    CHECK(v > 0.97);
    CHECK(v < 1.03);

    // MA(1): rho_1 = a0 a1 / (a0^2 + a1^2) = 0.5/1.25
    std::vector<double> ma = gen_linear(std::vector<double>{1.0, 0.5}, 50000, innovation::normal, 3);
    CHECK(std::abs(lag1_autocorr(ma) - 0.4) < 0.02);

    std::vector<double> a = gen_linear(std::vector<double>{1.0}, 100, innovation::normal, 9);
    std::vector<double> b = gen_linear(std::vector<double>{1.0}, 100, innovation::normal, 9);
    CHECK(a == b);

    // standardized innovations in every law
    for (innovation innov :
         {innovation::normal, innovation::uniform_centered, innovation::rademacher}) {
        std::vector<double> s = gen_linear(std::vector<double>{1.0}, 50000, innov, 4);
        CHECK(std::abs(mean_of(s)) < 0.03);
        CHECK(std::abs(var_of(s) - 1.0) < 0.03);
    }
}

TEST_CASE("lrd generator") {
    SUBCASE("coefficients") {
        std::vector<double> a = lrd_coefficients(0.75, 1.0, 10);
        CHECK(a[0] == 1.0);
        CHECK(a[1] == 1.0);
        CHECK(a[4] == doctest::Approx(std::pow(4.0, -0.75)).epsilon(1e-15));
        CHECK(std::abs(a[4] - 0.35355339) < 1e-7);
        CHECK_THROWS_AS((void)lrd_coefficients(0.5, 1.0, 10), error);
        CHECK_THROWS_AS((void)lrd_coefficients(1.0, 1.0, 10), error);
    }
    SUBCASE("sample variance matches the truncated coefficient sum") {
        std::size_t n = 50000, M = 10 * n;
        std::vector<double> a = lrd_coefficients(0.75, 1.0, M);
        double s2 = 0.0;
        for (double c : a) s2 += c * c;
        std::vector<double> x = gen_lrd(0.75, 1.0, n, M, innovation::normal, 12);
        CHECK(std::abs(var_of(x) - s2) / s2 < 0.05);
    }
    SUBCASE("normalized partial sums of Y approach the c_beta law") {
        // sum_i Y_{i-1} / (sqrt(c_beta) n^{3/2-beta}) => N(0,1); Y excludes
        // the a_0 eps term, i.e. coefficients (0, a_1, ..., a_M). The exact
        // variance of the sum follows from the innovation weights
        // w_j = sum_{i in [1,n], 0 <= i-j <= M} a_{i-j} via prefix sums.
        double beta = 0.75;
        auto exact_var = [&](std::size_t n, std::size_t M) {
            std::vector<double> a = lrd_coefficients(beta, 1.0, M);
            a[0] = 0.0;
            std::vector<double> P(M + 2, 0.0);
            for (std::size_t t = 0; t <= M; ++t) P[t + 1] = P[t] + a[t];
            double v = 0.0;
            for (long long j = -static_cast<long long>(M); j < static_cast<long long>(n); ++j) {
                long long lo = std::max(1LL - j, 0LL);
                long long hi = std::min(static_cast<long long>(n) - j, static_cast<long long>(M));
                if (hi < lo) continue;
                double w = P[hi + 1] - P[lo];
                v += w * w;
            }
            return v;
        };

        // 500-replicate sample variance agrees with the exact finite-n value
        std::size_t n = 2000, M = 20000;
        std::vector<double> a = lrd_coefficients(beta, 1.0, M);
        a[0] = 0.0;
        std::vector<double> sums(500);
        for (std::size_t r = 0; r < sums.size(); ++r) {
            std::vector<double> y = gen_linear(a, n, innovation::normal, 9000 + r);
            sums[r] = std::accumulate(y.begin(), y.end(), 0.0);
        }
        CHECK(std::abs(var_of(sums) / exact_var(n, M) - 1.0) < 0.2);

        // and the exact variance approaches c_beta n^{3-2beta} from below
        // (n^{-1/4} Karamata correction plus the documented M = 10n deficit)
        double c_beta = lrd_limit_scale(beta).c_beta;
        double prev = 0.0;
        for (std::size_t nn : {1000u, 10000u, 100000u, 1000000u}) {
            double ratio = exact_var(nn, 10 * nn) / (c_beta * std::pow(nn, 3.0 - 2.0 * beta));
            CHECK(ratio > prev);
            CHECK(ratio < 1.0);
            prev = ratio;
        }
        CHECK(std::abs(prev - 1.0) < 0.15);
    }
}

TEST_CASE("arch generator") {
    std::vector<double> tiny_b = gen_arch(1.0, 1e-8, 100000, 5);
    CHECK(std::abs(var_of(tiny_b) - 1.0) < 0.03);

    std::vector<double> x = gen_arch(1.0, 0.5, 100000, 6);
    double target = 1.0 / (1.0 - 0.25);  // a^2/(1-b^2) = 4/3
    CHECK(std::abs(var_of(x) - target) / target < 0.05);

    CHECK(gen_arch(1.0, 0.5, 50, 7) == gen_arch(1.0, 0.5, 50, 7));
    CHECK_THROWS_AS((void)gen_arch(1.0, 1.0, 100, 1), error);
    CHECK_THROWS_AS((void)gen_arch(0.0, 0.5, 100, 1), error);
}

TEST_CASE("nonlinear AR generator") {
    auto zero = [](double) { return 0.0; };
    auto one = [](double) { return 1.0; };

    xy_series iid = gen_nonlinear_ar(zero, one, 50000, 21);
    CHECK(std::abs(lag1_autocorr(iid.y)) < 0.02);

    auto half = [](double v) { return 0.5 * v; };
    xy_series ar = gen_nonlinear_ar(half, one, 50000, 22);
    CHECK(std::abs(lag1_autocorr(ar.y) - 0.5) < 0.02);
    // pairs are the lagged series
    for (std::size_t i = 0; i + 1 < 100; ++i) CHECK(ar.x[i + 1] == ar.y[i]);

    // deterministic geometric decay from y0 = 1 without burn-in
    xy_series decay = gen_nonlinear_ar(half, zero, 20, 23, 0, 1.0);
    for (std::size_t i = 0; i < decay.y.size(); ++i)
        CHECK(decay.y[i] == doctest::Approx(std::pow(2.0, -static_cast<double>(i + 1))));

    auto expl = [](double v) { return 2.0 * v; };
    CHECK_THROWS_AS((void)gen_nonlinear_ar(expl, zero, 100, 24, 0, 1.0), error);
}

TEST_CASE("discretized diffusion generator") {
    auto zero = [](double) { return 0.0; };

    diffusion_path flat = gen_diffusion_discrete(zero, zero, 1.0 / 250.0, 100, 2.5, 31);
    for (double r : flat.rates) CHECK(r == 2.5);
    for (double y : flat.pairs.y) CHECK(y == 0.0);
    CHECK(flat.pairs.x.size() == 100);
    CHECK(flat.rates.size() == 101);

    // deterministic Euler path toward theta = 1 at rate kappa = 2
    auto revert = [](double r) { return 2.0 * (1.0 - r); };
    diffusion_path path = gen_diffusion_discrete(revert, zero, 1.0 / 250.0, 1250, 0.0, 32);
    CHECK(std::abs(path.rates.back() - 1.0) < 1e-3);

    process_model m;
    CHECK(m.delta == doctest::Approx(1.0 / 250.0));  // daily convention default
}

TEST_CASE("dependence diagnostics") {
    SUBCASE("single coefficient") {
        dependence_diagnostics_result d = dependence_diagnostics(std::vector<double>{1.0}, 2.0);
        CHECK(d.theta.size() == 1);
        CHECK(d.theta[0] == doctest::Approx(std::sqrt(2.0)));
        for (std::size_t n : {4u, 16u, 64u}) {
            double ratio = dependence_Z(d, 2 * n) / dependence_Z(d, n);
            CHECK(std::abs(ratio - 2.0) < 0.2);  // Z_n grows linearly
        }
    }
    SUBCASE("geometric coefficients halve the tail norm per lag") {
        // stay >= 25 lags from the truncation horizon so the finite tail is
        // geometric to beyond double precision
        std::vector<double> a(80);
        for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::pow(2.0, -static_cast<double>(j));
        dependence_diagnostics_result d = dependence_diagnostics(a, 2.0);
        for (std::size_t j = 0; j + 25 < a.size(); ++j)
            CHECK(std::abs(d.psi_tail[j + 1] / d.psi_tail[j] - 0.5) < 1e-12);
    }
    SUBCASE("lrd tail norms decay like n^{1/2-beta}") {
        // M >> n_max keeps the truncated tail on the Karamata rate
        std::vector<double> a = lrd_coefficients(0.75, 1.0, 2000000);
        dependence_diagnostics_result d = dependence_diagnostics(a, 2.0);
        // log-log OLS slope over n in [10, 1000]
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (std::size_t n = 10; n <= 1000; n += 30) {
            double lx = std::log(static_cast<double>(n));
            double ly = std::log(d.psi_tail[n]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++cnt;
        }
        double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        CHECK(std::abs(slope - (-0.25)) < 0.03);
    }
    SUBCASE("Theta nondecreasing, Z nondecreasing in n") {
        std::vector<double> a = lrd_coefficients(0.6, 1.0, 500);
        dependence_diagnostics_result d = dependence_diagnostics(a, 2.0);
        for (std::size_t i = 0; i + 1 < d.Theta.size(); ++i) CHECK(d.Theta[i + 1] >= d.Theta[i]);
        double prev = 0.0;
        for (std::size_t n = 1; n < 2000; n *= 2) {
            double z = dependence_Z(d, n);
            CHECK(z >= prev);
            prev = z;
        }
    }
}

TEST_CASE("stationarity smoke: half means agree for the default models") {
    auto half_means_ok = [](const std::vector<double>& x, double factor) {
        std::size_t m = x.size() / 2;
        std::vector<double> a(x.begin(), x.begin() + m), b(x.begin() + m, x.end());
        double sd = std::sqrt(var_of(x));
        return std::abs(mean_of(a) - mean_of(b)) <
               factor * sd / std::sqrt(static_cast<double>(m));
    };

    std::size_t n = 50000;
    CHECK(half_means_ok(gen_linear(std::vector<double>{1.0}, n, innovation::normal, 71), 4.0));
    CHECK(half_means_ok(gen_linear(std::vector<double>{1.0, 0.5}, n, innovation::normal, 72), 4.0));
    CHECK(half_means_ok(gen_arch(1.0, 0.5, n, 73), 4.0));
    xy_series ar = gen_nonlinear_ar([](double v) { return 0.5 * v; }, [](double) { return 1.0; },
                                    n, 74);
    CHECK(half_means_ok(ar.y, 4.0));
    diffusion_path diff = gen_diffusion_discrete([](double r) { return 2.0 * (1.0 - r); },
                                                 [](double) { return 0.3; }, 1.0 / 250.0, n, 1.0,
                                                 75);
    // the diffusion level series mixes at rate kappa: allow the AR(1)
    // long-run factor sqrt((1+rho)/(1-rho)), rho = 1 - kappa*delta = 0.992
    CHECK(half_means_ok(diff.rates, 4.0 * std::sqrt((2.0 - 0.008) / 0.008)));

    // long memory invalidates the iid sqrt(m) scaling; use the exact
    // innovation-weight variance of the half-mean difference instead
    std::size_t nl = 50000, M = 10 * nl;
    std::vector<double> a = lrd_coefficients(0.75, 1.0, M);
    std::vector<double> x = gen_lrd(0.75, 1.0, nl, M, innovation::normal, 76);
    std::size_t m = nl / 2;
    // weight of eps_j in D = mean(first half) - mean(second half); eps index
    // j in [-M, n); prefix sums of a give each window sum in O(1)
    std::vector<double> P(M + 2, 0.0);
    for (std::size_t t = 0; t <= M; ++t) P[t + 1] = P[t] + a[t];
    auto window_sum = [&](long long i_lo, long long i_hi, long long j) {
        // sum of a_{i-j} over i in [i_lo, i_hi] with 0 <= i-j <= M
        long long lo = std::max(i_lo - j, 0LL);
        long long hi = std::min(i_hi - j, static_cast<long long>(M));
        if (hi < lo) return 0.0;
        return P[hi + 1] - P[lo];
    };
    double var_d = 0.0;
    for (long long j = -static_cast<long long>(M); j < static_cast<long long>(nl); ++j) {
        double w = window_sum(1, static_cast<long long>(m), j) -
                   window_sum(static_cast<long long>(m) + 1, static_cast<long long>(nl), j);
        var_d += w * w;
    }
    double sd_d = std::sqrt(var_d) / static_cast<double>(m);
    std::vector<double> first(x.begin(), x.begin() + m), second(x.begin() + m, x.end());
    CHECK(std::abs(mean_of(first) - mean_of(second)) < 4.0 * sd_d);
}
