#include "scb/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "scb/error.hpp"
#include "scb/quadrature.hpp"

namespace scb {

namespace {

// Base shapes on [-1, 1]; must stay in lockstep with src/simd_scalar.cpp.
double base_eval(kernel_family f, double u) {
    switch (f) {
        case kernel_family::epanechnikov: {
            double t = 1.0 - u * u;
            return t > 0.0 ? 0.75 * t : 0.0;
        }
        case kernel_family::rectangular:
            return std::abs(u) <= 1.0 ? 0.5 : 0.0;
        case kernel_family::triangular: {
            double t = 1.0 - std::abs(u);
            return t > 0.0 ? t : 0.0;
        }
        case kernel_family::quartic: {
            double t = 1.0 - u * u;
            if (t <= 0.0) return 0.0;
            return 0.9375 * t * t;
        }
        case kernel_family::custom:
            break;
    }
    return 0.0;
}

double base_deriv(kernel_family f, double u) {
    switch (f) {
        case kernel_family::epanechnikov:
            return u * u <= 1.0 ? -1.5 * u : 0.0;
        case kernel_family::rectangular:
            return 0.0;
        case kernel_family::triangular: {
            double a = std::abs(u);
            if (a >= 1.0 || u == 0.0) return 0.0;
            return u > 0.0 ? -1.0 : 1.0;
        }
        case kernel_family::quartic: {
            double t = 1.0 - u * u;
            return t > 0.0 ? -3.75 * u * t : 0.0;
        }
        case kernel_family::custom:
            break;
    }
    return 0.0;
}

double base_cdf(kernel_family f, double u) {
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    switch (f) {
        case kernel_family::epanechnikov:
            return 0.5 + 0.75 * u - 0.25 * u * u * u;
        case kernel_family::rectangular:
            return 0.5 * (u + 1.0);
        case kernel_family::triangular:
            return u < 0.0 ? 0.5 * (1.0 + u) * (1.0 + u) : 1.0 - 0.5 * (1.0 - u) * (1.0 - u);
        case kernel_family::quartic: {
            double u3 = u * u * u;
            return 0.9375 * (u - 2.0 * u3 / 3.0 + u3 * u * u / 5.0 + 8.0 / 15.0);
        }
        case kernel_family::custom:
            break;
    }
    return 0.0;
}

// Newton with bisection safeguard for the polynomial CDFs.
double invert_cdf(kernel_family f, double p) {
    double lo = -1.0, hi = 1.0;
    double x = 2.0 * p - 1.0;
    for (int it = 0; it < 100; ++it) {
        double c = base_cdf(f, x) - p;
        if (c > 0.0)
            hi = x;
        else
            lo = x;
        double d = base_eval(f, x);
        double step = d > 1e-12 ? c / d : 0.0;
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) < 1e-15) return next;
        x = next;
    }
    return x;
}

void fill_closed_form(kernel_profile& k) {
    switch (k.family) {
        case kernel_family::epanechnikov:
            k.lambda_K = 0.6;
            k.K1 = 0.0;
            k.K2 = 1.25;
            k.psi_K = 0.1;
            break;
        case kernel_family::rectangular:
            k.lambda_K = 0.5;
            k.K1 = 0.5;
            k.K2 = 0.0;
            k.psi_K = 1.0 / 6.0;
            break;
        case kernel_family::triangular:
            k.lambda_K = 2.0 / 3.0;
            k.K1 = 0.0;
            k.K2 = 1.5;
            k.psi_K = 1.0 / 12.0;
            break;
        case kernel_family::quartic:
            k.lambda_K = 5.0 / 7.0;
            k.K1 = 0.0;
            k.K2 = 1.5;
            k.psi_K = 1.0 / 14.0;
            break;
        case kernel_family::custom:
            fail(errc::internal, "closed forms exist only for built-in kernels");
    }
}

void finish_alpha_c0(kernel_profile& k) {
    if (k.K1 > 0.0) {
        k.alpha = 1;
        k.C0 = k.K1;
    } else {
        k.alpha = 2;
        k.C0 = k.K2;
    }
}

double table_interp(const kernel_profile& k, double u) {
    if (u < -k.A || u > k.A) return 0.0;
    double step = (2.0 * k.A) / (static_cast<double>(k.tab_u.size()) - 1.0);
    double pos = (u + k.A) / step;
    auto i = static_cast<std::size_t>(pos);
    if (i >= k.tab_u.size() - 1) return k.tab_k.back();
    double w = pos - static_cast<double>(i);
    return (1.0 - w) * k.tab_k[i] + w * k.tab_k[i + 1];
}

}  // namespace

double kernel_profile::evaluate(double u) const {
    if (family == kernel_family::custom) return table_interp(*this, u);
    return base_eval(family, u / scale) / scale;
}

double kernel_profile::derivative(double u) const {
    if (family == kernel_family::custom) {
        constexpr double h = 1e-5;
        return (table_interp(*this, u + h) - table_interp(*this, u - h)) / (2.0 * h);
    }
    return base_deriv(family, u / scale) / (scale * scale);
}

double kernel_profile::cdf(double u) const {
    if (family == kernel_family::custom) {
        if (u <= -A) return 0.0;
        if (u >= A) return 1.0;
        auto self = [this](double v) { return table_interp(*this, v); };
        return integrate(self, -A, u, 1e-12);
    }
    return base_cdf(family, u / scale);
}

double kernel_profile::inverse_cdf(double p) const {
    require(p >= 0.0 && p <= 1.0, errc::domain_error, "inverse_cdf requires p in [0,1]");
    if (family == kernel_family::custom) {
        // bisection on the (monotone) numeric cdf
        double lo = -A, hi = A;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (cdf(mid) < p)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-13 * A) break;
        }
        return 0.5 * (lo + hi);
    }
    switch (family) {
        case kernel_family::rectangular:
            return scale * (2.0 * p - 1.0);
        case kernel_family::triangular:
            return scale * (p <= 0.5 ? -1.0 + std::sqrt(2.0 * p) : 1.0 - std::sqrt(2.0 * (1.0 - p)));
        default:
            return scale * invert_cdf(family, p);
    }
}

simd::shape kernel_profile::simd_shape() const {
    switch (family) {
        case kernel_family::epanechnikov: return simd::shape::epanechnikov;
        case kernel_family::rectangular: return simd::shape::rectangular;
        case kernel_family::triangular: return simd::shape::triangular;
        case kernel_family::quartic: return simd::shape::quartic;
        case kernel_family::custom: break;
    }
    fail(errc::internal, "custom kernels have no simd shape");
}

kernel_profile kernel_by_name(std::string_view name) {
    kernel_profile k;
    k.scale = 1.0;
    k.A = 1.0;
    if (name == "epanechnikov" || name == "epan") {
        k.family = kernel_family::epanechnikov;
        k.name = "epanechnikov";
    } else if (name == "rect" || name == "rectangular" || name == "uniform") {
        k.family = kernel_family::rectangular;
        k.name = "rectangular";
    } else if (name == "triangular" || name == "tri") {
        k.family = kernel_family::triangular;
        k.name = "triangular";
    } else if (name == "quartic" || name == "biweight") {
        k.family = kernel_family::quartic;
        k.name = "quartic";
    } else if (name == "gaussian" || name == "normal") {
        fail(errc::not_a_kernel,
             "gaussian has unbounded support; use a compactly supported kernel "
             "(epanechnikov|rect|triangular|quartic) or a sampled table");
    } else {
        fail(errc::not_a_kernel, "unknown kernel: " + std::string(name));
    }
    fill_closed_form(k);
    finish_alpha_c0(k);
    return k;
}

kernel_profile make_table_kernel(std::string name, const std::vector<double>& u,
                                 const std::vector<double>& k_values, double A) {
    require(A > 0.0, errc::not_a_kernel, "support radius must be positive");
    require(u.size() == k_values.size() && u.size() >= 3, errc::not_a_kernel,
            "table needs at least 3 matching samples");
    for (double v : k_values)
        require(v >= -1e-12, errc::not_a_kernel, "kernel must be nonnegative");
    double step = 2.0 * A / (static_cast<double>(u.size()) - 1.0);
    for (std::size_t i = 0; i < u.size(); ++i)
        require(std::abs(u[i] - (-A + step * static_cast<double>(i))) <= 1e-9 * std::max(1.0, A),
                errc::not_a_kernel, "table abscissae must uniformly cover [-A, A]");

    kernel_profile k;
    k.name = std::move(name);
    k.family = kernel_family::custom;
    k.A = A;
    k.tab_u = u;
    k.tab_k = k_values;
    for (double& v : k.tab_k) v = std::max(v, 0.0);

    double mass = integrate([&k](double x) { return table_interp(k, x); }, -A, A, 1e-12);
    require(std::abs(mass - 1.0) <= 1e-3, errc::not_a_kernel,
            "kernel table mass is " + std::to_string(mass) + ", not 1");
    for (double& v : k.tab_k) v /= mass;

    kernel_constants c = quadrature_constants(k);
    k.lambda_K = c.lambda_K;
    k.K1 = c.K1;
    k.K2 = c.K2;
    k.psi_K = c.psi_K;
    finish_alpha_c0(k);
    return k;
}

kernel_profile scale_kernel(const kernel_profile& base, double c) {
    require(c > 0.0, errc::domain_error, "scale factor must be positive");
    require(base.builtin(), errc::domain_error, "scaling is supported for built-in kernels");
    kernel_profile k = base;
    k.name = base.name + "*" + std::to_string(c);
    k.scale = base.scale * c;
    k.A = base.A * c;
    k.lambda_K = base.lambda_K / c;
    k.K1 = base.K1 / c;
    k.K2 = base.K2 / (c * c);
    k.psi_K = base.psi_K * c * c;
    finish_alpha_c0(k);
    return k;
}

double kernel_autocorr(const kernel_profile& k, double s) {
    s = std::abs(s);
    if (s >= 2.0 * k.A) return 0.0;
    double lo = -k.A;
    double hi = k.A - s;
    // split at the kinks of both factors (kernels can be non-smooth at 0 and
    // +-A); a kink pair narrower than the panel node spacing would otherwise
    // slip through the error estimate
    std::vector<double> cuts{lo, hi};
    for (double c : {-k.A, 0.0, k.A, -k.A - s, -s, k.A - s})
        if (c > lo && c < hi) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    double v = 0.0;
    auto f = [&](double x) { return k.evaluate(x) * k.evaluate(x + s); };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) v += integrate(f, cuts[i], cuts[i + 1], 1e-13);
    return v / k.lambda_K;
}

kernel_constants quadrature_constants(const kernel_profile& k) {
    const double A = k.A;
    kernel_constants c{};
    c.mass = integrate([&](double x) { return k.evaluate(x); }, -A, A, 1e-13);
    c.lambda_K = integrate([&](double x) { double v = k.evaluate(x); return v * v; }, -A, A, 1e-13);
    double kl = k.evaluate(-A), kr = k.evaluate(A);
    c.K1 = (kl * kl + kr * kr) / (2.0 * c.lambda_K);
    // (C4) only constrains K' on the open support; trim the edges for table
    // kernels so the finite-difference stencil never straddles the boundary.
    double trim = k.family == kernel_family::custom ? 2e-5 : 0.0;
    c.K2 = integrate([&](double x) { double d = k.derivative(x); return d * d; }, -A + trim,
                     A - trim, 1e-13) /
           (2.0 * c.lambda_K);
    c.psi_K = 0.5 * integrate([&](double x) { return x * x * k.evaluate(x); }, -A, A, 1e-13);
    return c;
}

}  // namespace scb
