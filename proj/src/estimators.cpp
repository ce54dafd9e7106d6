#include "scb/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "scb/error.hpp"
#include "scb/simd.hpp"

namespace scb {

const char* curve_kind_name(curve_kind k) {
    switch (k) {
        case curve_kind::density: return "density";
        case curve_kind::density_h: return "density_h";
        case curve_kind::regression: return "regression";
        case curve_kind::variance: return "variance";
        case curve_kind::derivative1: return "derivative1";
        case curve_kind::derivative2: return "derivative2";
    }
    return "unknown";
}

double curve_estimate::value_at(double x) const {
    require(in_range(x), errc::domain_error, "evaluation point outside curve grid");
    double step = grid.spacing();
    double pos = (x - grid.lo) / step;
    auto i = static_cast<std::size_t>(pos);
    if (i >= static_cast<std::size_t>(grid.m - 1)) return values.back();
    double w = pos - static_cast<double>(i);
    return (1.0 - w) * values[i] + w * values[i + 1];
}

bool curve_estimate::failed_in(double lo, double hi) const {
    for (int idx : failed_points) {
        double x = grid.points[idx];
        if (x >= lo && x <= hi) return true;
    }
    return false;
}

curve_estimate constant_curve(const evaluation_grid& g, double value, curve_kind kind) {
    curve_estimate c;
    c.grid = g;
    c.values.assign(g.m, value);
    c.kind = kind;
    return c;
}

namespace {

// Precomputed dispatch for K((x - t)/b): built-ins go through the simd layer
// with the kernel scale folded into inv_b and an amplitude factor; table
// kernels use the generic scalar path.
struct eval_plan {
    bool use_simd = false;
    simd::shape shp = simd::shape::epanechnikov;
    double radius = 0.0;     // A * b, window half-width
    double inv_b_eff = 0.0;  // 1/(b * scale) for simd, 1/b for generic
    double amp = 1.0;        // 1/scale
    double amp_deriv = 1.0;  // 1/scale^2
    const kernel_profile* k = nullptr;
    double b = 0.0;
};

eval_plan make_plan(const kernel_profile& k, double b) {
    require(b > 0.0, errc::domain_error, "bandwidth must be positive");
    eval_plan p;
    p.k = &k;
    p.b = b;
    p.radius = k.A * b;
    if (k.builtin()) {
        p.use_simd = true;
        p.shp = k.simd_shape();
        p.inv_b_eff = 1.0 / (b * k.scale);
        p.amp = 1.0 / k.scale;
        p.amp_deriv = 1.0 / (k.scale * k.scale);
    } else {
        p.inv_b_eff = 1.0 / b;
    }
    return p;
}

double plan_sum(const eval_plan& p, const double* xs, std::size_t i0, std::size_t i1, double t) {
    if (p.use_simd) return p.amp * simd::kernel_sum(p.shp, xs, i0, i1, t, p.inv_b_eff);
    double acc = 0.0;
    for (std::size_t i = i0; i < i1; ++i) acc += p.k->evaluate((xs[i] - t) * p.inv_b_eff);
    return acc;
}

simd::sum_pair plan_sum_weighted(const eval_plan& p, const double* xs, const double* ws,
                                 std::size_t i0, std::size_t i1, double t) {
    if (p.use_simd) {
        simd::sum_pair r = simd::kernel_sum_weighted(p.shp, xs, ws, i0, i1, t, p.inv_b_eff);
        return {p.amp * r.wsum, p.amp * r.wysum};
    }
    double acc = 0.0, accw = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
        double kk = p.k->evaluate((xs[i] - t) * p.inv_b_eff);
        acc += kk;
        accw += kk * ws[i];
    }
    return {acc, accw};
}

double plan_deriv_sum(const eval_plan& p, const double* xs, std::size_t i0, std::size_t i1,
                      double t) {
    if (p.use_simd) return p.amp_deriv * simd::kernel_deriv_sum(p.shp, xs, i0, i1, t, p.inv_b_eff);
    double acc = 0.0;
    for (std::size_t i = i0; i < i1; ++i) acc += p.k->derivative((xs[i] - t) * p.inv_b_eff);
    return acc;
}

// Walks the ascending grid with a sliding window over sorted xs and calls
// fn(j, i0, i1) with the index range covering [t_j - radius, t_j + radius].
template <class F>
void for_each_window(const std::vector<double>& grid_points, const std::vector<double>& xs,
                     double radius, F&& fn) {
    std::size_t n = xs.size();
    std::size_t i0 = 0, i1 = 0;
    for (std::size_t j = 0; j < grid_points.size(); ++j) {
        double t = grid_points[j];
        while (i0 < n && xs[i0] < t - radius) ++i0;
        if (i1 < i0) i1 = i0;
        while (i1 < n && xs[i1] <= t + radius) ++i1;
        fn(j, i0, i1);
    }
}

std::vector<double> sorted_copy(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    std::sort(out.begin(), out.end());
    return out;
}

void sorted_pairs(std::span<const double> x, std::span<const double> y, std::vector<double>& xs,
                  std::vector<double>& ys) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    xs.resize(x.size());
    ys.resize(x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        xs[i] = x[idx[i]];
        ys[i] = y[idx[i]];
    }
}

}  // namespace

curve_estimate kde(std::span<const double> data, double b, const evaluation_grid& grid,
                   const kernel_profile& k) {
    require(!data.empty(), errc::empty_data, "kde needs at least one observation");
    eval_plan plan = make_plan(k, b);
    std::vector<double> xs = sorted_copy(data);

    curve_estimate out;
    out.grid = grid;
    out.kind = curve_kind::density;
    out.bandwidth = b;
    out.n = data.size();
    out.values.resize(grid.m);
    double norm = 1.0 / (static_cast<double>(data.size()) * b);
    for_each_window(grid.points, xs, plan.radius, [&](std::size_t j, std::size_t i0, std::size_t i1) {
        out.values[j] = norm * plan_sum(plan, xs.data(), i0, i1, grid.points[j]);
    });
    return out;
}

curve_estimate kde_derivative(std::span<const double> data, double b, const evaluation_grid& grid,
                              const kernel_profile& k) {
    require(!data.empty(), errc::empty_data, "kde_derivative needs at least one observation");
    eval_plan plan = make_plan(k, b);
    std::vector<double> xs = sorted_copy(data);

    curve_estimate out;
    out.grid = grid;
    out.kind = curve_kind::derivative1;
    out.bandwidth = b;
    out.n = data.size();
    out.values.resize(grid.m);
    double norm = -1.0 / (static_cast<double>(data.size()) * b * b);
    for_each_window(grid.points, xs, plan.radius, [&](std::size_t j, std::size_t i0, std::size_t i1) {
        out.values[j] = norm * plan_deriv_sum(plan, xs.data(), i0, i1, grid.points[j]);
    });
    return out;
}

curve_estimate nadaraya_watson(std::span<const double> x, std::span<const double> y, double b,
                               const evaluation_grid& grid, const kernel_profile& k) {
    require(!x.empty(), errc::empty_data, "regression needs at least one pair");
    require(x.size() == y.size(), errc::domain_error, "x and y lengths differ");
    eval_plan plan = make_plan(k, b);
    std::vector<double> xs, ys;
    sorted_pairs(x, y, xs, ys);

    curve_estimate out;
    out.grid = grid;
    out.kind = curve_kind::regression;
    out.bandwidth = b;
    out.n = x.size();
    out.values.resize(grid.m);
    for_each_window(grid.points, xs, plan.radius, [&](std::size_t j, std::size_t i0, std::size_t i1) {
        simd::sum_pair s = plan_sum_weighted(plan, xs.data(), ys.data(), i0, i1, grid.points[j]);
        if (s.wsum <= 0.0) {
            out.values[j] = 0.0;
            out.failed_points.push_back(static_cast<int>(j));
        } else {
            out.values[j] = s.wysum / s.wsum;
        }
    });
    return out;
}

curve_estimate local_poly_fit(std::span<const double> x, std::span<const double> y, double b,
                              const evaluation_grid& grid, const kernel_profile& k, int degree,
                              int deriv_order) {
    require(degree >= deriv_order && deriv_order >= 0, errc::domain_error,
            "need degree >= deriv_order >= 0");
    require(degree <= 5, errc::domain_error, "local polynomial degree capped at 5");
    require(x.size() == y.size(), errc::domain_error, "x and y lengths differ");
    require(x.size() > static_cast<std::size_t>(degree) + 1, errc::empty_data,
            "need n > degree + 1");
    eval_plan plan = make_plan(k, b);
    std::vector<double> xs, ys;
    sorted_pairs(x, y, xs, ys);

    curve_estimate out;
    out.grid = grid;
    out.kind = deriv_order >= 2 ? curve_kind::derivative2
                                : (deriv_order == 1 ? curve_kind::derivative1
                                                    : curve_kind::regression);
    out.bandwidth = b;
    out.n = x.size();
    out.values.resize(grid.m);

    const int dim = degree + 1;
    double r_fact = 1.0;
    for (int i = 2; i <= deriv_order; ++i) r_fact *= i;

    std::array<double, 11> mom{};
    std::array<double, 36> S{};
    std::array<double, 6> rhs{}, sol{};

    for_each_window(grid.points, xs, plan.radius, [&](std::size_t j, std::size_t i0, std::size_t i1) {
        double t = grid.points[j];
        if (i1 - i0 < static_cast<std::size_t>(dim)) {
            out.values[j] = 0.0;
            out.failed_points.push_back(static_cast<int>(j));
            return;
        }
        mom.fill(0.0);
        rhs.fill(0.0);
        // powers of z = (x - t)/b keep the normal equations well conditioned
        for (std::size_t i = i0; i < i1; ++i) {
            double z = (xs[i] - t) / plan.b;
            double w = k.evaluate(z);
            if (w <= 0.0) continue;
            double zp = 1.0;
            for (int p = 0; p <= 2 * degree; ++p) {
                mom[p] += w * zp;
                if (p <= degree) rhs[p] += w * zp * ys[i];
                zp *= z;
            }
        }
        for (int a = 0; a < dim; ++a)
            for (int c = 0; c < dim; ++c) S[a * dim + c] = mom[a + c];

        // Cholesky; singular fits are per-point failures
        bool ok = true;
        for (int a = 0; a < dim && ok; ++a) {
            for (int c = 0; c <= a; ++c) {
                double acc = S[a * dim + c];
                for (int p = 0; p < c; ++p) acc -= S[a * dim + p] * S[c * dim + p];
                if (a == c) {
                    if (acc <= 1e-12 * (1.0 + mom[0])) {
                        ok = false;
                        break;
                    }
                    S[a * dim + c] = std::sqrt(acc);
                } else {
                    S[a * dim + c] = acc / S[c * dim + c];
                }
            }
        }
        if (!ok) {
            out.values[j] = 0.0;
            out.failed_points.push_back(static_cast<int>(j));
            return;
        }
        for (int a = 0; a < dim; ++a) {
            double acc = rhs[a];
            for (int p = 0; p < a; ++p) acc -= S[a * dim + p] * sol[p];
            sol[a] = acc / S[a * dim + a];
        }
        for (int a = dim - 1; a >= 0; --a) {
            double acc = sol[a];
            for (int p = a + 1; p < dim; ++p) acc -= S[p * dim + a] * sol[p];
            sol[a] = acc / S[a * dim + a];
        }
        double scale = std::pow(plan.b, deriv_order);
        out.values[j] = r_fact * sol[deriv_order] / scale;
    });
    return out;
}

std::vector<double> residuals(std::span<const double> x, std::span<const double> y,
                              const curve_estimate& mu, int* dropped,
                              std::vector<double>* kept_x) {
    require(x.size() == y.size(), errc::domain_error, "x and y lengths differ");
    std::vector<double> out;
    out.reserve(x.size());
    if (kept_x) kept_x->clear();
    int drop = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!mu.in_range(x[i])) {
            ++drop;
            continue;
        }
        out.push_back(y[i] - mu.value_at(x[i]));
        if (kept_x) kept_x->push_back(x[i]);
    }
    if (dropped) *dropped = drop;
    return out;
}

curve_estimate variance_estimate(std::span<const double> x, std::span<const double> sq_resid,
                                 double h, const evaluation_grid& grid, const kernel_profile& k) {
    curve_estimate out = nadaraya_watson(x, sq_resid, h, grid, k);
    out.kind = curve_kind::variance;
    for (double& v : out.values) {
        if (v < 0.0) {
            v = 0.0;
            ++out.clipped;
        }
    }
    return out;
}

namespace {

void require_shared_grid(const curve_estimate& a, const curve_estimate& b, const char* what) {
    require(a.grid == b.grid, errc::domain_error, std::string(what) + ": curves on different grids");
}

curve_estimate curvature_bias(const curve_estimate& d1, const curve_estimate& d2,
                              const curve_estimate& f, const curve_estimate& f_d1, double bw,
                              double psi_K, double f_min) {
    require_shared_grid(d1, d2, "bias correction");
    require_shared_grid(d1, f, "bias correction");
    require_shared_grid(d1, f_d1, "bias correction");
    curve_estimate out;
    out.grid = d1.grid;
    out.kind = d1.kind;
    out.bandwidth = bw;
    out.n = d1.n;
    out.values.resize(d1.grid.m);
    double b2psi = bw * bw * psi_K;
    for (int j = 0; j < d1.grid.m; ++j) {
        double fv = f.values[j];
        require(fv >= f_min, errc::density_too_small,
                "estimated density below floor at x = " + std::to_string(d1.grid.points[j]));
        out.values[j] = b2psi * (d2.values[j] + 2.0 * d1.values[j] * f_d1.values[j] / fv);
    }
    return out;
}

}  // namespace

curve_estimate bias_correction_mu(const curve_estimate& mu_d1, const curve_estimate& mu_d2,
                                  const curve_estimate& f, const curve_estimate& f_d1, double b,
                                  double psi_K, double f_min) {
    return curvature_bias(mu_d1, mu_d2, f, f_d1, b, psi_K, f_min);
}

curve_estimate bias_correction_sigma(const curve_estimate& s2_d1, const curve_estimate& s2_d2,
                                     const curve_estimate& f_d1, const curve_estimate& f, double h,
                                     double psi_K, double f_min) {
    return curvature_bias(s2_d1, s2_d2, f, f_d1, h, psi_K, f_min);
}

sup_statistic sup_weighted_deviation(const curve_estimate& a, const curve_estimate& b,
                                     const std::vector<double>& weight) {
    require_shared_grid(a, b, "sup deviation");
    require(static_cast<int>(weight.size()) == a.grid.m, errc::domain_error,
            "weight length must match grid");
    sup_statistic s;
    s.value = -1.0;
    for (int j = 0; j < a.grid.m; ++j) {
        double v = weight[j] * std::abs(a.values[j] - b.values[j]);
        if (v > s.value) {
            s.value = v;
            s.argmax = a.grid.points[j];
            s.argmax_index = j;
        }
    }
    return s;
}

sup_statistic sup_weighted_deviation(const curve_estimate& a, const curve_estimate& b,
                                     double weight) {
    return sup_weighted_deviation(a, b, std::vector<double>(a.grid.m, weight));
}

}  // namespace scb
