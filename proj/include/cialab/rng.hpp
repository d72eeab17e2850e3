#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace cialab {

// splitmix64 step; used to derive independent sub-stream seeds from one
// master seed so that per-camera / per-stage streams don't alias.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master;
    std::uint64_t out = 0;
    for (std::uint64_t i = 0; i <= stream; ++i) out = splitmix64(s);
    return out;
}

// Deterministic RNG. mt19937_64 core with hand-rolled distributions, since
// std::uniform_real_distribution / normal_distribution are implementation
// defined and would break seed-reproducibility across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of mantissa.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    // Box-Muller; one value per call, no caching, so the stream position is
    // easy to reason about in tests.
    double normal(double mean, double stddev) {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * mag * std::cos(2.0 * M_PI * u2);
    }

    // Normal truncated to [mean - 3*stddev, mean + 3*stddev] and to >= lo.
    double truncated_normal(double mean, double stddev, double lo) {
        double v = normal(mean, stddev);
        double a = mean - 3.0 * stddev;
        double b = mean + 3.0 * stddev;
        if (v < a) v = a;
        if (v > b) v = b;
        return v < lo ? lo : v;
    }

    // Weighted pick from a cumulative-weight table built by the caller.
    std::size_t pick(std::span<const double> cumulative) {
        double x = uniform() * cumulative.back();
        std::size_t i = 0;
        while (i + 1 < cumulative.size() && x >= cumulative[i]) ++i;
        return i;
    }

    // In-place Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace cialab
