#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "scb/estimators.hpp"
#include "scb/grid.hpp"
#include "scb/kernel.hpp"
#include "scb/rng.hpp"

namespace scb {

// One variate per call; the stream carries all randomness.
using sampler_fn = std::function<double(rng_stream&)>;

// Simulated Pi_n replicates and the empirical cutoff at level alpha.
struct pi_sample {
    std::vector<double> values;  // one Pi_n per replicate, in replicate order
    int reps = 0;
    double level = 0.05;
    double cutoff = 0.0;  // upper order statistic at ceil(reps * (1-alpha))
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double bandwidth = 0.0;
    std::string kernel_name;
};

// Upper order statistic at 1-based index ceil(len * level) after ascending
// sort. Conservative for band cutoffs.
double upper_quantile(std::span<const double> values, double level);

// Pi_n = sup_{x in grid} |sum_k K((X*_k - x)/b) eta*_k| / (n b f^{1/2}(x)),
// X* iid from f_sampler, eta* iid mean 0 variance 1 from eta_sampler, f taken
// from f_curve. Replicate r uses rng stream (seed, r); results are assembled
// in replicate order, so output is independent of thread scheduling.
pi_sample simulate_pi_n(const sampler_fn& f_sampler, const sampler_fn& eta_sampler, std::size_t n,
                        double b, const evaluation_grid& grid, const kernel_profile& k,
                        const curve_estimate& f_curve, int reps, double alpha, std::uint64_t seed,
                        int threads = 0);

// Draws X* = X_J + b V with J uniform over data indices and V distributed as
// the kernel density; X* then has exactly the data's kde as density.
sampler_fn smoothed_bootstrap_sampler(std::vector<double> data, double b, kernel_profile k);

sampler_fn normal_sampler();
sampler_fn rademacher_sampler();
sampler_fn zero_sampler();  // degenerate, test-only
sampler_fn uniform_sampler(double lo, double hi);

}  // namespace scb
