#include "scb/processes.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <sstream>

#include "scb/error.hpp"
#include "scb/rng.hpp"

namespace scb {

namespace {

constexpr double kDivergeLimit = 1e6;

double draw_innovation(rng_stream& rng, innovation innov) {
    switch (innov) {
        case innovation::normal: return rng.normal();
        case innovation::uniform_centered: return rng.uniform_centered();
        case innovation::rademacher: return rng.rademacher();
    }
    return 0.0;
}

// FFTW plan creation is not thread safe; executions on distinct buffers are.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// Linear convolution tail: out[p] = sum_j a[j] eps[p-j] for p in [M, M+n),
// computed circularly with L >= len(eps) so those positions never wrap.
std::vector<double> convolve_valid(const std::vector<double>& coeffs,
                                   const std::vector<double>& eps, std::size_t n) {
    const std::size_t M = coeffs.size() - 1;
    std::size_t L = 1;
    while (L < eps.size()) L <<= 1;

    std::vector<double> out(n);
    const auto nc = L / 2 + 1;
    double* ra = fftw_alloc_real(L);
    double* rb = fftw_alloc_real(L);
    fftw_complex* ca = fftw_alloc_complex(nc);
    fftw_complex* cb = fftw_alloc_complex(nc);
    fftw_plan fwd_a, fwd_b, inv;
    {
        std::lock_guard<std::mutex> g(fftw_mutex());
        fwd_a = fftw_plan_dft_r2c_1d(static_cast<int>(L), ra, ca, FFTW_ESTIMATE);
        fwd_b = fftw_plan_dft_r2c_1d(static_cast<int>(L), rb, cb, FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(static_cast<int>(L), ca, ra, FFTW_ESTIMATE);
    }
    std::memset(ra, 0, sizeof(double) * L);
    std::memcpy(ra, coeffs.data(), sizeof(double) * coeffs.size());
    std::memset(rb, 0, sizeof(double) * L);
    std::memcpy(rb, eps.data(), sizeof(double) * eps.size());
    fftw_execute(fwd_a);
    fftw_execute(fwd_b);
    double norm = 1.0 / static_cast<double>(L);
    for (std::size_t i = 0; i < nc; ++i) {
        double re = ca[i][0] * cb[i][0] - ca[i][1] * cb[i][1];
        double im = ca[i][0] * cb[i][1] + ca[i][1] * cb[i][0];
        ca[i][0] = re * norm;
        ca[i][1] = im * norm;
    }
    fftw_execute(inv);
    for (std::size_t i = 0; i < n; ++i) out[i] = ra[M + i];
    {
        std::lock_guard<std::mutex> g(fftw_mutex());
        fftw_destroy_plan(fwd_a);
        fftw_destroy_plan(fwd_b);
        fftw_destroy_plan(inv);
    }
    fftw_free(ra);
    fftw_free(rb);
    fftw_free(ca);
    fftw_free(cb);
    return out;
}

}  // namespace

innovation innovation_by_name(std::string_view name) {
    if (name == "normal") return innovation::normal;
    if (name == "uniform" || name == "uniform_centered") return innovation::uniform_centered;
    if (name == "rademacher") return innovation::rademacher;
    fail(errc::domain_error, "unknown innovation: " + std::string(name));
}

const char* innovation_name(innovation i) {
    switch (i) {
        case innovation::normal: return "normal";
        case innovation::uniform_centered: return "uniform_centered";
        case innovation::rademacher: return "rademacher";
    }
    return "normal";
}

std::vector<double> gen_linear(std::span<const double> coeffs, std::size_t n, innovation innov,
                               std::uint64_t seed) {
    require(!coeffs.empty(), errc::domain_error, "need at least one coefficient");
    require(n >= 1, errc::domain_error, "need n >= 1");
    const std::size_t q = coeffs.size() - 1;  // lags beyond 0
    rng_stream rng(seed, 0);
    std::vector<double> eps(n + q);
    for (double& e : eps) e = draw_innovation(rng, innov);
    // X_i = sum_j a_j eps_{i-j}; eps index offset so presample innovations
    // play the burn-in role exactly.
    if (q >= 64 && n >= 4096) {
        std::vector<double> a(coeffs.begin(), coeffs.end());
        return convolve_valid(a, eps, n);
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= q; ++j) acc += coeffs[j] * eps[q + i - j];
        x[i] = acc;
    }
    return x;
}

std::vector<double> lrd_coefficients(double beta, double ell, std::size_t M) {
    require(beta > 0.5 && beta < 1.0, errc::domain_error, "beta must lie in (1/2, 1)");
    require(ell > 0.0, errc::domain_error, "ell must be positive");
    std::vector<double> a(M + 1);
    a[0] = 1.0;
    for (std::size_t j = 1; j <= M; ++j) a[j] = ell * std::pow(static_cast<double>(j), -beta);
    return a;
}

std::vector<double> gen_lrd(double beta, double ell, std::size_t n, std::size_t M,
                            innovation innov, std::uint64_t seed) {
    require(n >= 1, errc::domain_error, "need n >= 1");
    if (M == 0) M = 10 * n;
    std::vector<double> a = lrd_coefficients(beta, ell, M);
    rng_stream rng(seed, 0);
    std::vector<double> eps(n + M);
    for (double& e : eps) e = draw_innovation(rng, innov);
    return convolve_valid(a, eps, n);
}

std::vector<double> gen_arch(double a, double b, std::size_t n, std::uint64_t seed,
                             std::size_t burn_in) {
    require(a > 0.0, errc::domain_error, "ARCH requires a > 0");
    require(b > 0.0, errc::domain_error, "ARCH requires b > 0");
    require(b < 1.0, errc::domain_error, "ARCH requires b < 1 for stationarity");
    rng_stream rng(seed, 0);
    std::vector<double> out(n);
    double x = 0.0;
    for (std::size_t i = 0; i < burn_in + n; ++i) {
        double eps = rng.normal();
        x = eps * std::sqrt(a * a + b * b * x * x);
        if (i >= burn_in) out[i - burn_in] = x;
    }
    return out;
}

xy_series gen_nonlinear_ar(const std::function<double(double)>& mu,
                           const std::function<double(double)>& sigma, std::size_t n,
                           std::uint64_t seed, std::size_t burn_in, double y0) {
    require(n >= 1, errc::domain_error, "need n >= 1");
    rng_stream rng(seed, 0);
    xy_series out;
    out.x.resize(n);
    out.y.resize(n);
    double y = y0;
    for (std::size_t i = 0; i < burn_in + n; ++i) {
        double prev = y;
        y = mu(prev) + sigma(prev) * rng.normal();
        require(std::abs(y) <= kDivergeLimit, errc::diverged,
                "nonlinear AR path exceeded 1e6 at step " + std::to_string(i));
        if (i >= burn_in) {
            out.x[i - burn_in] = prev;
            out.y[i - burn_in] = y;
        }
    }
    return out;
}

diffusion_path gen_diffusion_discrete(const std::function<double(double)>& mu,
                                      const std::function<double(double)>& sigma, double delta,
                                      std::size_t n, double x0, std::uint64_t seed) {
    require(delta > 0.0, errc::domain_error, "delta must be positive");
    require(n >= 1, errc::domain_error, "need n >= 1");
    rng_stream rng(seed, 0);
    diffusion_path out;
    out.delta = delta;
    out.rates.resize(n + 1);
    out.rates[0] = x0;
    double sq = std::sqrt(delta);
    for (std::size_t i = 0; i < n; ++i) {
        double r = out.rates[i];
        double next = r + mu(r) * delta + sigma(r) * sq * rng.normal();
        require(std::abs(next) <= kDivergeLimit, errc::diverged,
                "diffusion path exceeded 1e6 at step " + std::to_string(i));
        out.rates[i + 1] = next;
    }
    out.pairs.x.assign(out.rates.begin(), out.rates.end() - 1);
    out.pairs.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.pairs.y[i] = out.rates[i + 1] - out.rates[i];
    return out;
}

double dependence_Z(const dependence_diagnostics_result& d, std::size_t n) {
    const long long M = static_cast<long long>(d.Theta.size()) - 1;
    auto Theta_at = [&](long long j) -> double {
        if (j < 0) return 0.0;
        if (j > M) return d.Theta[M];
        return d.Theta[j];
    };
    double z = 0.0;
    long long nn = static_cast<long long>(n);
    for (long long k = -nn; k <= M; ++k) {
        double diff = Theta_at(nn + k) - Theta_at(k);
        z += diff * diff;
    }
    return z;
}

dependence_diagnostics_result dependence_diagnostics(std::span<const double> coeffs, double p,
                                                     std::size_t n) {
    require(!coeffs.empty(), errc::domain_error, "need coefficients");
    require(p > 0.0, errc::domain_error, "moment order must be positive");
    dependence_diagnostics_result d;
    d.p = p;
    d.p_prime = std::min(p, 2.0);
    // ||eps - eps'||_{p'} for standardized innovations: exactly sqrt(2) at
    // p' = 2, and bounded by it for p' < 2 (Lyapunov); diagnostics use the
    // p' = 2 value throughout.
    const double eps_norm = std::sqrt(2.0);

    const std::size_t M = coeffs.size() - 1;
    d.theta.resize(M + 1);
    for (std::size_t i = 0; i <= M; ++i) d.theta[i] = std::abs(coeffs[i]) * eps_norm;

    double expo = d.p_prime / 2.0;
    d.Theta.resize(M + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i <= M; ++i) {
        acc += std::pow(d.theta[i], expo);
        d.Theta[i] = acc;
    }

    d.z_window_n = n == 0 ? M + 1 : n;
    d.Z_n = dependence_Z(d, d.z_window_n);

    d.psi_tail.resize(M + 1);
    double tail = 0.0;
    for (std::size_t j = M + 1; j-- > 0;) {
        tail += coeffs[j] * coeffs[j];
        d.psi_tail[j] = std::sqrt(tail);
    }
    return d;
}

std::function<double(double)> named_function(const std::string& spec) {
    auto parse_args = [](const std::string& s) {
        std::vector<double> args;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) args.push_back(std::stod(tok));
        return args;
    };
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    std::vector<double> args =
        colon == std::string::npos ? std::vector<double>{} : parse_args(spec.substr(colon + 1));

    if (head == "zero") return [](double) { return 0.0; };
    if (head == "const") {
        require(args.size() == 1, errc::domain_error, "const:c takes one parameter");
        double c = args[0];
        return [c](double) { return c; };
    }
    if (head == "linear") {
        require(args.size() == 2, errc::domain_error, "linear:a0,a1 takes two parameters");
        double a0 = args[0], a1 = args[1];
        return [a0, a1](double x) { return a0 + a1 * x; };
    }
    if (head == "mean_revert") {
        require(args.size() == 2, errc::domain_error, "mean_revert:kappa,theta takes two parameters");
        double kappa = args[0], theta = args[1];
        return [kappa, theta](double x) { return kappa * (theta - x); };
    }
    if (head == "square_clip") {
        require(args.size() == 1, errc::domain_error, "square_clip:c takes one parameter");
        double c = args[0];
        return [c](double x) { return std::min(x * x, c * c); };
    }
    if (head == "sine") return [](double x) { return std::sin(x); };
    fail(errc::domain_error, "unknown function spec: " + spec);
}

process_model::kind_t process_model::kind_by_name(std::string_view name) {
    if (name == "iid") return kind_t::iid;
    if (name == "linear") return kind_t::linear;
    if (name == "lrd" || name == "lrd_linear") return kind_t::lrd_linear;
    if (name == "arch") return kind_t::arch;
    if (name == "nlar" || name == "nonlinear_ar") return kind_t::nonlinear_ar;
    if (name == "diffusion" || name == "diffusion_discrete") return kind_t::diffusion_discrete;
    fail(errc::domain_error, "unknown process model: " + std::string(name));
}

const char* process_model::kind_name(kind_t k) {
    switch (k) {
        case kind_t::iid: return "iid";
        case kind_t::linear: return "linear";
        case kind_t::lrd_linear: return "lrd_linear";
        case kind_t::arch: return "arch";
        case kind_t::nonlinear_ar: return "nonlinear_ar";
        case kind_t::diffusion_discrete: return "diffusion_discrete";
    }
    return "iid";
}

std::vector<double> generate_series(const process_model& m, std::size_t n, std::uint64_t seed) {
    switch (m.kind) {
        case process_model::kind_t::iid: {
            rng_stream rng(seed, 0);
            std::vector<double> out(n);
            if (m.iid_uniform01)
                for (double& v : out) v = rng.uniform();
            else
                for (double& v : out) v = draw_innovation(rng, m.innov);
            return out;
        }
        case process_model::kind_t::linear:
            return gen_linear(m.coeffs, n, m.innov, seed);
        case process_model::kind_t::lrd_linear:
            return gen_lrd(m.beta, m.ell, n, m.trunc_M, m.innov, seed);
        case process_model::kind_t::arch:
            return gen_arch(m.arch_a, m.arch_b, n, seed, m.burn_in);
        case process_model::kind_t::nonlinear_ar:
            return gen_nonlinear_ar(named_function(m.mu_spec), named_function(m.sigma_spec), n,
                                    seed, m.burn_in, m.x0)
                .x;
        case process_model::kind_t::diffusion_discrete:
            return gen_diffusion_discrete(named_function(m.mu_spec), named_function(m.sigma_spec),
                                          m.delta, n, m.x0, seed)
                .rates;
    }
    fail(errc::internal, "unhandled model kind");
}

xy_series generate_pairs(const process_model& m, std::size_t n, std::uint64_t seed) {
    switch (m.kind) {
        case process_model::kind_t::nonlinear_ar:
            return gen_nonlinear_ar(named_function(m.mu_spec), named_function(m.sigma_spec), n,
                                    seed, m.burn_in, m.x0);
        case process_model::kind_t::diffusion_discrete:
            return gen_diffusion_discrete(named_function(m.mu_spec), named_function(m.sigma_spec),
                                          m.delta, n, m.x0, seed)
                .pairs;
        default:
            fail(errc::domain_error, "model kind has no regression pairs");
    }
}

marginal_density model_marginal(const process_model& m, std::size_t n) {
    marginal_density out;
    constexpr double inv_sqrt2pi = 0.3989422804014327;
    auto normal_marginal = [&](double sd) {
        out.sd = sd;
        out.available = true;
        out.pdf = [sd](double x) {
            double z = x / sd;
            return inv_sqrt2pi / sd * std::exp(-0.5 * z * z);
        };
        out.dpdf = [sd](double x) {
            double z = x / sd;
            return -x / (sd * sd * sd) * inv_sqrt2pi * std::exp(-0.5 * z * z);
        };
    };
    switch (m.kind) {
        case process_model::kind_t::iid:
            if (m.iid_uniform01) {
                out.sd = std::sqrt(1.0 / 12.0);
                out.available = true;
                out.pdf = [](double x) { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; };
                out.dpdf = [](double) { return 0.0; };
            } else if (m.innov == innovation::normal) {
                normal_marginal(1.0);
            } else if (m.innov == innovation::uniform_centered) {
                out.sd = 1.0;
                out.available = true;
                constexpr double r = 1.7320508075688772;
                out.pdf = [](double x) { return std::abs(x) <= r ? 1.0 / (2.0 * r) : 0.0; };
                out.dpdf = [](double) { return 0.0; };
            }
            return out;
        case process_model::kind_t::linear:
        case process_model::kind_t::lrd_linear: {
            if (m.innov != innovation::normal) return out;
            double s2 = 0.0;
            if (m.kind == process_model::kind_t::linear) {
                for (double a : m.coeffs) s2 += a * a;
            } else {
                std::size_t M = m.trunc_M == 0 ? 10 * n : m.trunc_M;
                for (double a : lrd_coefficients(m.beta, m.ell, M)) s2 += a * a;
            }
            normal_marginal(std::sqrt(s2));
            return out;
        }
        default:
            return out;
    }
}

}  // namespace scb
