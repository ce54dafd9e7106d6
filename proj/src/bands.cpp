#include "scb/bands.hpp"

#include <algorithm>
#include <cmath>

#include "scb/error.hpp"

namespace scb {

band_method band_method_by_name(std::string_view name) {
    if (name == "gumbel") return band_method::gumbel;
    if (name == "simulated" || name == "sim") return band_method::simulated;
    fail(errc::domain_error, "unknown band method: " + std::string(name));
}

const char* band_method_name(band_method m) {
    return m == band_method::gumbel ? "gumbel" : "simulated";
}

const char* band_target_name(band_target t) {
    switch (t) {
        case band_target::density: return "density";
        case band_target::regression: return "regression";
        case band_target::variance: return "variance";
    }
    return "regression";
}

namespace {

constexpr double kVarianceFloor = 1e-12;

void check_band_inputs(double b, double lo, double hi, double alpha) {
    require(b > 0.0, errc::domain_error, "bandwidth must be positive");
    require(lo < hi, errc::domain_error, "need lo < hi");
    require(alpha > 0.0 && alpha < 1.0, errc::domain_error, "alpha must lie in (0,1)");
}

evaluation_grid band_grid(double lo, double hi, double b, const band_options& opt) {
    return opt.grid_m > 0 ? make_grid(lo, hi, opt.grid_m) : default_grid(lo, hi, b);
}

// Derivative estimates and residuals are computed on a grid padded beyond
// [lo, hi] by the derivative-window reach, so the band interval never sees
// one-sided windows or the sample-edge cliff; the band itself is the
// [offset, offset + m) slice.
struct padded_grid {
    evaluation_grid ext;
    int offset = 0;
    int m = 0;
};

padded_grid make_padded_grid(double lo, double hi, double b, double pad,
                             const band_options& opt) {
    evaluation_grid band = band_grid(lo, hi, b, opt);
    double s = band.spacing();
    int n_pad = static_cast<int>(std::ceil(pad / s));
    padded_grid pg;
    pg.offset = n_pad;
    pg.m = band.m;
    pg.ext.m = band.m + 2 * n_pad;
    pg.ext.points.resize(pg.ext.m);
    for (int i = 0; i < pg.ext.m; ++i) pg.ext.points[i] = lo + s * (i - n_pad);
    pg.ext.points[n_pad] = lo;
    pg.ext.points[n_pad + band.m - 1] = hi;
    pg.ext.lo = pg.ext.points.front();
    pg.ext.hi = pg.ext.points.back();
    return pg;
}

evaluation_grid band_slice_grid(const padded_grid& pg, double lo, double hi) {
    evaluation_grid g;
    g.lo = lo;
    g.hi = hi;
    g.m = pg.m;
    g.points.assign(pg.ext.points.begin() + pg.offset, pg.ext.points.begin() + pg.offset + pg.m);
    return g;
}

std::vector<double> slice_values(const std::vector<double>& v, const padded_grid& pg) {
    return std::vector<double>(v.begin() + pg.offset, v.begin() + pg.offset + pg.m);
}

curve_estimate slice_curve(const curve_estimate& c, const padded_grid& pg, double lo, double hi) {
    curve_estimate out;
    out.grid = band_slice_grid(pg, lo, hi);
    out.values = slice_values(c.values, pg);
    out.kind = c.kind;
    out.bandwidth = c.bandwidth;
    out.n = c.n;
    for (int idx : c.failed_points)
        if (idx >= pg.offset && idx < pg.offset + pg.m)
            out.failed_points.push_back(idx - pg.offset);
    out.clipped = c.clipped;
    return out;
}

// Clamp a density curve at the floor for use as a ratio denominator in the
// pad region (the floor is still *enforced* on [lo, hi] by the caller).
curve_estimate clamp_density(const curve_estimate& f, double fmin) {
    curve_estimate out = f;
    for (double& v : out.values) v = std::max(v, fmin);
    return out;
}

void check_density_floor(const curve_estimate& f, double lo, double hi) {
    double fmin = density_floor(lo, hi);
    for (int j = 0; j < f.grid.m; ++j) {
        double x = f.grid.points[j];
        if (x < lo || x > hi) continue;  // the guard applies inside [l, u]
        require(f.values[j] >= fmin, errc::density_too_small,
                "estimated density below 0.01/(u-l) at x = " + std::to_string(x) +
                    "; shrink the interval or enlarge the bandwidth");
    }
}

void check_no_failures(const curve_estimate& c, double lo, double hi, errc code, const char* what) {
    require(!c.failed_in(lo, hi), code, std::string(what) + " failed inside the band interval");
}

// Fills the gumbel constants (informational under the simulated method, where
// an oversized bbar is not an error).
void fill_gumbel_info(band_calibration& cal, double alpha, double b, double lo, double hi,
                      const kernel_profile& k, const band_options& opt, bool required) {
    double bbar = opt.l1_log_arg_b ? b : b / (hi - lo);
    cal.bbar = bbar;
    cal.z_alpha = gumbel_quantile(alpha);
    if (required) {
        cal.d_n = normalizing_dn(bbar, k);
        cal.halfwidth_scale = halfwidth_l1(alpha, bbar, k);
        return;
    }
    try {
        cal.d_n = normalizing_dn(bbar, k);
    } catch (const error&) {
        cal.d_n = 0.0;
    }
}

// Derivative of a smooth curve on its own grid by central differences;
// used for the optional density bias correction (f'' from the 2b-smoothed f').
std::vector<double> grid_derivative(const curve_estimate& c) {
    std::vector<double> out(c.grid.m);
    double h = c.grid.spacing();
    for (int j = 0; j < c.grid.m; ++j) {
        if (j == 0)
            out[j] = (c.values[1] - c.values[0]) / h;
        else if (j == c.grid.m - 1)
            out[j] = (c.values[j] - c.values[j - 1]) / h;
        else
            out[j] = (c.values[j + 1] - c.values[j - 1]) / (2.0 * h);
    }
    return out;
}

simultaneous_band assemble(const evaluation_grid& grid, std::vector<double> center,
                           const std::vector<double>& halfwidth, band_target target, double alpha) {
    simultaneous_band band;
    band.grid = grid;
    band.level = alpha;
    band.target = target;
    band.center = std::move(center);
    band.lower.resize(grid.m);
    band.upper.resize(grid.m);
    for (int j = 0; j < grid.m; ++j) {
        band.lower[j] = band.center[j] - halfwidth[j];
        band.upper[j] = band.center[j] + halfwidth[j];
    }
    return band;
}

}  // namespace

simultaneous_band scb_density(std::span<const double> data, double b, double lo, double hi,
                              double alpha, const kernel_profile& k, band_method method,
                              const band_options& opt) {
    check_band_inputs(b, lo, hi, alpha);
    require(!data.empty(), errc::empty_data, "density band needs data");
    evaluation_grid grid = band_grid(lo, hi, b, opt);
    const std::size_t n = data.size();

    curve_estimate f_n = kde(data, b, grid, k);
    check_density_floor(f_n, lo, hi);

    std::vector<double> center = f_n.values;
    if (opt.density_bias_correct) {
        double b2 = opt.deriv_bandwidth_factor * b;
        curve_estimate f_d1 = kde_derivative(data, b2, grid, k);
        std::vector<double> f_d2 = grid_derivative(f_d1);
        for (int j = 0; j < grid.m; ++j) center[j] -= b * b * k.psi_K * f_d2[j];
    }

    band_calibration cal;
    cal.level = alpha;
    cal.method = method;
    std::vector<double> hw(grid.m);
    if (method == band_method::gumbel) {
        fill_gumbel_info(cal, alpha, b, lo, hi, k, opt, true);
        double L = cal.halfwidth_scale;
        for (int j = 0; j < grid.m; ++j)
            hw[j] = L * std::sqrt(k.lambda_K * f_n.values[j] / (static_cast<double>(n) * b));
    } else {
        fill_gumbel_info(cal, alpha, b, lo, hi, k, opt, false);
        sampler_fn fs = smoothed_bootstrap_sampler(std::vector<double>(data.begin(), data.end()),
                                                   b, k);
        pi_sample pis = simulate_pi_n(fs, normal_sampler(), n, b, grid, k, f_n, opt.pi_reps, alpha,
                                      opt.seed, opt.threads);
        cal.halfwidth_scale = pis.cutoff;
        cal.pi_reps = opt.pi_reps;
        cal.seed = opt.seed;
        for (int j = 0; j < grid.m; ++j) hw[j] = pis.cutoff * std::sqrt(f_n.values[j]);
    }

    simultaneous_band band = assemble(grid, std::move(center), hw, band_target::density, alpha);
    if (opt.clip_density_lower)
        for (int j = 0; j < grid.m; ++j)
            band.lower[j] = std::min(band.center[j], std::max(band.lower[j], 0.0));
    band.calibration = cal;
    band.kernel_name = k.name;
    band.bandwidth = b;
    band.n = n;
    band.small_nb_warning = static_cast<double>(n) * b < 50.0;
    return band;
}

regression_stage regression_center(std::span<const double> x, std::span<const double> y, double b,
                                   double lo, double hi, double alpha, const kernel_profile& k,
                                   const band_options& opt) {
    check_band_inputs(b, lo, hi, alpha);
    require(x.size() == y.size() && !x.empty(), errc::empty_data,
            "regression needs matching nonempty x, y");
    double b2 = opt.deriv_bandwidth_factor * b;
    padded_grid pg = make_padded_grid(lo, hi, b, k.A * b2, opt);
    const evaluation_grid& grid = pg.ext;
    const double fmin = density_floor(lo, hi);

    regression_stage st;
    st.f_n = kde(x, b, grid, k);
    check_density_floor(st.f_n, lo, hi);
    st.mu_n = nadaraya_watson(x, y, b, grid, k);
    check_no_failures(st.mu_n, lo, hi, errc::empty_window, "Nadaraya-Watson window");

    curve_estimate mu_d1 = local_poly_fit(x, y, b2, grid, k, 2, 1);
    curve_estimate mu_d2 = local_poly_fit(x, y, b2, grid, k, 3, 2);
    check_no_failures(mu_d1, lo, hi, errc::singular_fit, "local polynomial (mu')");
    check_no_failures(mu_d2, lo, hi, errc::singular_fit, "local polynomial (mu'')");
    curve_estimate f_d1 = kde_derivative(x, b2, grid, k);
    curve_estimate bias = bias_correction_mu(mu_d1, mu_d2, clamp_density(st.f_n, fmin), f_d1, b,
                                             k.psi_K, fmin);

    st.center = st.mu_n;
    for (int j = 0; j < grid.m; ++j) st.center.values[j] = st.mu_n.values[j] - bias.values[j];
    st.resid = residuals(x, y, st.center, nullptr, &st.resid_x);
    return st;
}

simultaneous_band scb_regression(std::span<const double> x, std::span<const double> y, double b,
                                 double lo, double hi, double alpha, const kernel_profile& k,
                                 band_method method, const band_options& opt) {
    regression_stage st = regression_center(x, y, b, lo, hi, alpha, k, opt);
    padded_grid pg = make_padded_grid(lo, hi, b, k.A * opt.deriv_bandwidth_factor * b, opt);
    const std::size_t n = x.size();

    // sigma_hat: NW of squared residuals against the bias-corrected center
    std::vector<double> sq = st.resid;
    for (double& e : sq) e *= e;
    curve_estimate sigma2_ext = variance_estimate(st.resid_x, sq, b, pg.ext, k);
    check_no_failures(sigma2_ext, lo, hi, errc::empty_window, "variance window");

    curve_estimate f_n = slice_curve(st.f_n, pg, lo, hi);
    const evaluation_grid& grid = f_n.grid;
    std::vector<double> center = slice_values(st.center.values, pg);
    std::vector<double> sigma2 = slice_values(sigma2_ext.values, pg);
    std::vector<double> sigma_hat(grid.m);
    for (int j = 0; j < grid.m; ++j)
        sigma_hat[j] = opt.sigma_override ? *opt.sigma_override
                                          : std::sqrt(std::max(sigma2[j], kVarianceFloor));

    band_calibration cal;
    cal.level = alpha;
    cal.method = method;
    std::vector<double> hw(grid.m);
    if (method == band_method::gumbel) {
        fill_gumbel_info(cal, alpha, b, lo, hi, k, opt, true);
        double L = cal.halfwidth_scale;
        for (int j = 0; j < grid.m; ++j)
            hw[j] = L * sigma_hat[j] *
                    std::sqrt(k.lambda_K / (static_cast<double>(n) * b * f_n.values[j]));
    } else {
        fill_gumbel_info(cal, alpha, b, lo, hi, k, opt, false);
        sampler_fn fs =
            smoothed_bootstrap_sampler(std::vector<double>(x.begin(), x.end()), b, k);
        pi_sample pis = simulate_pi_n(fs, normal_sampler(), n, b, grid, k, f_n, opt.pi_reps, alpha,
                                      opt.seed, opt.threads);
        cal.halfwidth_scale = pis.cutoff;
        cal.pi_reps = opt.pi_reps;
        cal.seed = opt.seed;
        for (int j = 0; j < grid.m; ++j)
            hw[j] = pis.cutoff * sigma_hat[j] / std::sqrt(f_n.values[j]);
    }

    simultaneous_band band =
        assemble(grid, std::move(center), hw, band_target::regression, alpha);
    band.calibration = cal;
    band.kernel_name = k.name;
    band.bandwidth = b;
    band.n = n;
    band.small_nb_warning = static_cast<double>(n) * b < 50.0;
    return band;
}

simultaneous_band scb_volatility(std::span<const double> x, std::span<const double> resid,
                                 double h, double lo, double hi, double alpha,
                                 const kernel_profile& k, band_method method,
                                 const band_options& opt) {
    check_band_inputs(h, lo, hi, alpha);
    require(x.size() == resid.size() && !x.empty(), errc::empty_data,
            "volatility band needs matching nonempty x, residuals");
    double h2 = opt.deriv_bandwidth_factor * h;
    padded_grid pg = make_padded_grid(lo, hi, h, k.A * h2, opt);
    const std::size_t n = x.size();
    const double fmin = density_floor(lo, hi);

    curve_estimate f_n1_ext = kde(x, h, pg.ext, k);
    check_density_floor(f_n1_ext, lo, hi);

    std::vector<double> sq(resid.size());
    for (std::size_t i = 0; i < resid.size(); ++i) sq[i] = resid[i] * resid[i];
    curve_estimate sigma2_ext = variance_estimate(x, sq, h, pg.ext, k);
    check_no_failures(sigma2_ext, lo, hi, errc::empty_window, "variance window");

    curve_estimate s2_d1 = local_poly_fit(x, sq, h2, pg.ext, k, 2, 1);
    curve_estimate s2_d2 = local_poly_fit(x, sq, h2, pg.ext, k, 3, 2);
    check_no_failures(s2_d1, lo, hi, errc::singular_fit, "local polynomial ((sigma^2)')");
    check_no_failures(s2_d2, lo, hi, errc::singular_fit, "local polynomial ((sigma^2)'')");
    curve_estimate f_d1 = kde_derivative(x, h2, pg.ext, k);
    curve_estimate bias = bias_correction_sigma(s2_d1, s2_d2, f_d1,
                                                clamp_density(f_n1_ext, fmin), h, k.psi_K, fmin);

    curve_estimate f_n1 = slice_curve(f_n1_ext, pg, lo, hi);
    const evaluation_grid& grid = f_n1.grid;
    std::vector<double> sigma2 = slice_values(sigma2_ext.values, pg);
    std::vector<double> bias_vals = slice_values(bias.values, pg);

    int floored = 0;
    std::vector<double> center(grid.m);
    for (int j = 0; j < grid.m; ++j) {
        center[j] = sigma2[j] - bias_vals[j];
        if (center[j] < 0.0) {
            center[j] = 0.0;
            ++floored;
        }
    }

    double nu;
    if (opt.nu_eta) {
        nu = *opt.nu_eta;
    } else {
        // fourth moment of standardized residuals on the interval, minus 1
        double acc = 0.0;
        std::size_t used = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] < lo || x[i] > hi) continue;
            double s2 = std::max(sigma2_ext.value_at(x[i]), kVarianceFloor);
            double z = resid[i] * resid[i] / s2;
            acc += z * z;
            ++used;
        }
        require(used > 0, errc::empty_data, "no residuals inside the interval");
        nu = acc / static_cast<double>(used) - 1.0;
    }
    require(nu > 0.0, errc::domain_error, "nu_eta must be positive");

    band_calibration cal;
    cal.level = alpha;
    cal.method = method;
    std::vector<double> hw(grid.m);
    std::vector<double> s2_mult(grid.m);
    for (int j = 0; j < grid.m; ++j) s2_mult[j] = std::max(sigma2[j], kVarianceFloor);
    if (method == band_method::gumbel) {
        fill_gumbel_info(cal, alpha, h, lo, hi, k, opt, true);
        double L = cal.halfwidth_scale;
        for (int j = 0; j < grid.m; ++j)
            hw[j] = L * s2_mult[j] *
                    std::sqrt(k.lambda_K * nu / (static_cast<double>(n) * h * f_n1.values[j]));
    } else {
        fill_gumbel_info(cal, alpha, h, lo, hi, k, opt, false);
        sampler_fn fs =
            smoothed_bootstrap_sampler(std::vector<double>(x.begin(), x.end()), h, k);
        pi_sample pis = simulate_pi_n(fs, normal_sampler(), n, h, grid, k, f_n1, opt.pi_reps,
                                      alpha, opt.seed, opt.threads);
        cal.halfwidth_scale = pis.cutoff;
        cal.pi_reps = opt.pi_reps;
        cal.seed = opt.seed;
        for (int j = 0; j < grid.m; ++j)
            hw[j] = pis.cutoff * std::sqrt(nu) * s2_mult[j] / std::sqrt(f_n1.values[j]);
    }

    simultaneous_band band = assemble(grid, std::move(center), hw, band_target::variance, alpha);
    band.calibration = cal;
    band.kernel_name = k.name;
    band.bandwidth = h;
    band.n = n;
    band.nu_eta = nu;
    band.negative_center_floored = floored;
    band.small_nb_warning = static_cast<double>(n) * h < 50.0;
    return band;
}

gof_result gof_test(const simultaneous_band& band, const std::vector<double>& candidate,
                    const std::string& hypothesis) {
    require(candidate.size() == static_cast<std::size_t>(band.grid.m), errc::domain_error,
            "candidate must be evaluated on the band grid");
    gof_result r;
    r.hypothesis = hypothesis;
    r.level = band.level;
    r.max_violation = 0.0;
    r.violation_argmax = band.grid.points[0];
    for (int j = 0; j < band.grid.m; ++j) {
        double v = std::max(band.lower[j] - candidate[j], candidate[j] - band.upper[j]);
        if (v > r.max_violation) {
            r.max_violation = v;
            r.violation_argmax = band.grid.points[j];
        }
    }
    r.contained = r.max_violation == 0.0;
    return r;
}

gof_result gof_test(const simultaneous_band& band, const std::function<double(double)>& candidate,
                    const std::string& hypothesis) {
    std::vector<double> values(band.grid.m);
    for (int j = 0; j < band.grid.m; ++j) values[j] = candidate(band.grid.points[j]);
    return gof_test(band, values, hypothesis);
}

affine_fit fit_affine(std::span<const double> x, std::span<const double> y, double lo, double hi) {
    require(x.size() == y.size(), errc::domain_error, "x and y lengths differ");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        ++n;
    }
    require(n >= 2, errc::empty_data, "need at least two pairs inside the interval");
    double denom = static_cast<double>(n) * sxx - sx * sx;
    require(std::abs(denom) > 1e-12 * (sxx + 1.0), errc::singular_fit,
            "degenerate regressor support for the affine fit");
    affine_fit f;
    f.a1 = (static_cast<double>(n) * sxy - sx * sy) / denom;
    f.a0 = (sy - f.a1 * sx) / static_cast<double>(n);
    f.n_used = n;
    return f;
}

}  // namespace scb
