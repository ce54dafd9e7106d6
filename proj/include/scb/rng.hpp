#pragma once

#include <cstdint>
#include <random>

namespace scb {

// splitmix64; used to decorrelate (seed, stream) pairs before seeding the engine.
inline std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// A seeded stream addressed by (root seed, stream id). Replicate r of a
// simulation uses stream id r, so results are independent of how replicates
// are scheduled across threads.
class rng_stream {
  public:
    rng_stream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + stream_id * 0x9e3779b97f4a7c15ULL);
        std::uint64_t w0 = splitmix64(s), w1 = splitmix64(s), w2 = splitmix64(s), w3 = splitmix64(s);
        std::seed_seq seq{static_cast<std::uint32_t>(w0), static_cast<std::uint32_t>(w0 >> 32),
                          static_cast<std::uint32_t>(w1), static_cast<std::uint32_t>(w1 >> 32),
                          static_cast<std::uint32_t>(w2), static_cast<std::uint32_t>(w2 >> 32),
                          static_cast<std::uint32_t>(w3), static_cast<std::uint32_t>(w3 >> 32)};
        engine_.seed(seq);
    }

    // uniform on [0,1)
    double uniform() { return unif_(engine_); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() { return normal_(engine_); }

    double rademacher() { return (engine_() & 1u) ? 1.0 : -1.0; }

    // uniform centered and scaled to mean 0, variance 1
    double uniform_centered() { return (2.0 * uniform() - 1.0) * 1.7320508075688772; }

    std::uint64_t raw() { return engine_(); }

    // index uniform on [0, n)
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_));
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace scb
