#include "scb/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "scb/error.hpp"
#include "scb/parallel.hpp"
#include "scb/simd.hpp"

namespace scb {

double upper_quantile(std::span<const double> values, double level) {
    require(!values.empty(), errc::empty_data, "quantile of an empty sample");
    require(level > 0.0 && level < 1.0, errc::domain_error, "quantile level must lie in (0,1)");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    auto idx = static_cast<std::size_t>(
        std::ceil(static_cast<double>(v.size()) * level));
    if (idx == 0) idx = 1;
    return v[idx - 1];
}

namespace {

struct pi_weights {
    std::vector<double> scale;  // 1/(n b sqrt(f(x_j)))
};

pi_weights make_pi_weights(const curve_estimate& f_curve, std::size_t n, double b) {
    pi_weights w;
    w.scale.resize(f_curve.grid.m);
    double inv_nb = 1.0 / (static_cast<double>(n) * b);
    for (int j = 0; j < f_curve.grid.m; ++j) {
        double f = f_curve.values[j];
        require(f > 0.0, errc::density_too_small,
                "Pi_n weight density must be strictly positive on the grid");
        w.scale[j] = inv_nb / std::sqrt(f);
    }
    return w;
}

}  // namespace

pi_sample simulate_pi_n(const sampler_fn& f_sampler, const sampler_fn& eta_sampler, std::size_t n,
                        double b, const evaluation_grid& grid, const kernel_profile& k,
                        const curve_estimate& f_curve, int reps, double alpha, std::uint64_t seed,
                        int threads) {
    require(reps >= 100, errc::invalid_reps, "need at least 100 replicates");
    require(n >= 1, errc::empty_data, "need n >= 1");
    require(b > 0.0, errc::domain_error, "bandwidth must be positive");
    require(f_curve.grid == grid, errc::domain_error, "f_curve must live on the evaluation grid");
    pi_weights w = make_pi_weights(f_curve, n, b);

    const bool use_simd = k.builtin();
    const simd::shape shp = use_simd ? k.simd_shape() : simd::shape::epanechnikov;
    const double inv_b_eff = use_simd ? 1.0 / (b * k.scale) : 1.0 / b;
    const double amp = use_simd ? 1.0 / k.scale : 1.0;
    const double radius = k.A * b;

    pi_sample out;
    out.values.assign(reps, 0.0);
    out.reps = reps;
    out.level = alpha;
    out.seed = seed;
    out.n = n;
    out.bandwidth = b;
    out.kernel_name = k.name;

    parallel_for(0, reps, [&](std::int64_t rep) {
        rng_stream rng(seed, static_cast<std::uint64_t>(rep));
        thread_local std::vector<std::pair<double, double>> draws;
        thread_local std::vector<double> xs, etas;
        draws.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            draws[i] = {f_sampler(rng), eta_sampler(rng)};
        std::sort(draws.begin(), draws.end(),
                  [](const auto& a, const auto& c) { return a.first < c.first; });
        xs.resize(n);
        etas.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = draws[i].first;
            etas[i] = draws[i].second;
        }
        double best = 0.0;
        std::size_t i0 = 0, i1 = 0;
        for (int j = 0; j < grid.m; ++j) {
            double t = grid.points[j];
            while (i0 < n && xs[i0] < t - radius) ++i0;
            if (i1 < i0) i1 = i0;
            while (i1 < n && xs[i1] <= t + radius) ++i1;
            double s;
            if (use_simd) {
                s = amp * simd::kernel_sum_weighted(shp, xs.data(), etas.data(), i0, i1, t,
                                                    inv_b_eff)
                              .wysum;
            } else {
                s = 0.0;
                for (std::size_t i = i0; i < i1; ++i)
                    s += k.evaluate((xs[i] - t) * inv_b_eff) * etas[i];
            }
            best = std::max(best, std::abs(s) * w.scale[j]);
        }
        out.values[rep] = best;
    }, threads);

    out.cutoff = upper_quantile(out.values, 1.0 - alpha);
    return out;
}

sampler_fn smoothed_bootstrap_sampler(std::vector<double> data, double b, kernel_profile k) {
    require(!data.empty(), errc::empty_data, "bootstrap sampler needs data");
    require(b >= 0.0, errc::domain_error, "bandwidth must be nonnegative");
    auto shared = std::make_shared<std::vector<double>>(std::move(data));
    auto kern = std::make_shared<kernel_profile>(std::move(k));
    return [shared, kern, b](rng_stream& rng) {
        double base = (*shared)[rng.index(shared->size())];
        return base + b * kern->inverse_cdf(rng.uniform());
    };
}

sampler_fn normal_sampler() {
    return [](rng_stream& rng) { return rng.normal(); };
}

sampler_fn rademacher_sampler() {
    return [](rng_stream& rng) { return rng.rademacher(); };
}

sampler_fn zero_sampler() {
    return [](rng_stream& rng) {
        (void)rng;
        return 0.0;
    };
}

sampler_fn uniform_sampler(double lo, double hi) {
    require(lo < hi, errc::domain_error, "uniform sampler needs lo < hi");
    return [lo, hi](rng_stream& rng) { return rng.uniform(lo, hi); };
}

}  // namespace scb
