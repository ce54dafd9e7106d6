#include "scb/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include "scb/error.hpp"
#include "scb/quadrature.hpp"

namespace scb {

namespace {
constexpr double pi_v = 3.141592653589793238462643383279502884;
}

double gumbel_cdf(double z) { return std::exp(-2.0 * std::exp(-z)); }

double gumbel_quantile(double alpha) {
    require(alpha > 0.0 && alpha < 1.0, errc::domain_error, "alpha must lie in (0,1)");
    // cdf(z) = 1 - alpha  <=>  z = -log(-log(1-alpha)/2) = -log log (1-alpha)^{-1/2}
    return -std::log(-0.5 * std::log1p(-alpha));
}

double normalizing_dn(double bbar, const kernel_profile& k) {
    require(bbar > 0.0 && bbar < 1.0, errc::domain_error, "bbar must lie in (0,1)");
    double L = std::log(1.0 / bbar);
    require(L > 1.0, errc::bandwidth_too_large,
            "bandwidth too large relative to the interval: need log((u-l)/b) > 1");
    double s = std::sqrt(2.0 * L);
    if (k.K1 > 0.0) return s + (std::log(k.K1 / std::sqrt(pi_v)) + 0.5 * std::log(L)) / s;
    require(k.K2 > 0.0, errc::domain_error, "kernel has K1 = K2 = 0");
    return s + std::log(std::sqrt(k.K2) / (std::sqrt(2.0) * pi_v)) / s;
}

double halfwidth_l1(double alpha, double bbar, const kernel_profile& k) {
    double dn = normalizing_dn(bbar, k);
    double s = std::sqrt(2.0 * std::log(1.0 / bbar));
    return gumbel_quantile(alpha) / s + dn;
}

double halfwidth_l2(double alpha, double b, double interval_length) {
    require(b > 0.0 && interval_length > 0.0, errc::domain_error,
            "need positive bandwidth and interval");
    require(b < 0.5 * interval_length, errc::domain_error, "need b < (u-l)/2");
    auto Jn = static_cast<long long>(std::ceil(interval_length / (2.0 * b)));
    require(Jn >= 2, errc::domain_error, "grid count J_n must be at least 2");
    double LJ = std::log(static_cast<double>(Jn));
    double s = std::sqrt(2.0 * LJ);
    return gumbel_quantile(alpha) / s + s -
           (0.5 * std::log(LJ) + std::log(2.0 * std::sqrt(pi_v))) / s;
}

lrd_spec lrd_limit_scale(double beta, double ell) {
    require(beta > 0.5 && beta < 1.0, errc::domain_error, "beta must lie in (1/2, 1)");
    require(ell > 0.0, errc::domain_error, "ell must be positive");
    // int_0^inf x^{-beta} (1+x)^{-beta} dx, split at 1 with the power
    // substitutions x = s^{1/(1-beta)} and (after x -> 1/t) t = r^{1/(2beta-1)}
    // to remove the endpoint singularities.
    double p1 = 1.0 / (1.0 - beta);
    double p2 = 1.0 / (2.0 * beta - 1.0);
    double head =
        p1 * integrate([&](double s) { return std::pow(1.0 + std::pow(s, p1), -beta); }, 0.0, 1.0);
    double tail =
        p2 * integrate([&](double r) { return std::pow(1.0 + std::pow(r, p2), -beta); }, 0.0, 1.0);
    lrd_spec out;
    out.beta = beta;
    out.ell = ell;
    out.c_beta = (head + tail) / ((3.0 - 2.0 * beta) * (1.0 - beta));
    return out;
}

double lrd_half_normal_scale(const lrd_spec& spec, const kernel_profile& k,
                             const std::function<double(double)>& f,
                             const std::function<double(double)>& df, double lo, double hi) {
    require(lo < hi, errc::domain_error, "need lo < hi");
    constexpr int m = 10001;
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / (m - 1);
        double fx = f(x);
        if (fx <= 0.0) continue;
        best = std::max(best, std::abs(df(x)) / std::sqrt(fx));
    }
    return std::sqrt(spec.c_beta) / std::sqrt(k.lambda_K) * best;
}

const char* lrd_regime_name(lrd_regime r) {
    switch (r) {
        case lrd_regime::gumbel: return "gumbel";
        case lrd_regime::half_normal: return "half_normal";
        case lrd_regime::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

bandwidth_diagnostics check_bandwidth_conditions(std::size_t n, double b, double delta1,
                                                 double delta2, const std::optional<lrd_spec>& lrd) {
    require(n >= 2, errc::domain_error, "need n >= 2");
    require(b > 0.0, errc::domain_error, "need b > 0");
    bandwidth_diagnostics d;
    double nn = static_cast<double>(n);
    d.c1_lower = std::pow(nn, -delta1) <= b;
    d.c1_upper = b <= std::pow(nn, -delta2);
    d.c1 = d.c1_lower && d.c1_upper;
    std::ostringstream os;
    os << "(C1) n^-d1 <= b: " << (d.c1_lower ? "yes" : "no")
       << ", b <= n^-d2: " << (d.c1_upper ? "yes" : "no");
    if (lrd) {
        d.lrd_statistic = std::sqrt(b) * std::pow(nn, 1.0 - lrd->beta) * lrd->ell;
        d.log_root_n = std::sqrt(std::log(nn));
        if (d.lrd_statistic < 1.0 / d.log_root_n)
            d.regime = lrd_regime::gumbel;
        else if (d.lrd_statistic > d.log_root_n)
            d.regime = lrd_regime::half_normal;
        else
            d.regime = lrd_regime::indeterminate;
        os << "; lrd statistic b^{1/2} n^{1-beta} ell = " << d.lrd_statistic
           << ", regime " << lrd_regime_name(d.regime) << " (finite-n heuristic)";
    }
    d.summary = os.str();
    return d;
}

}  // namespace scb
