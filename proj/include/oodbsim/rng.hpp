#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oodbsim {

// Deterministic random stream. The generator is std::mt19937_64 (fully pinned by
// the standard); all draw functions are implemented here rather than with
// std::*_distribution so that a given seed produces the same sequence on every
// toolchain.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) {
        // multiply-shift; bias is negligible for the small ranges used here
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform integer on [lo, hi], both inclusive.
    long uniform_int(long lo, long hi) {
        return lo + static_cast<long>(uniform_index(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform real on [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Exponential with the given mean (inverse CDF).
    double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

    // The mean-parameter distribution used throughout the generator:
    // uniform integer on [1, 2*mean - 1], so the expectation equals mean.
    long around_mean(long mean) { return uniform_int(1, 2 * mean - 1); }

    // Seed for a dependent stream that must not advance this one afterwards.
    std::uint64_t fork_seed() { return next_u64(); }

    // Weighted pick over non-negative weights; returns index. Total must be > 0.
    std::size_t pick_weighted(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double x = uniform01() * total;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            x -= weights[i];
            if (x < 0.0) return i;
        }
        return weights.size() - 1;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

} // namespace oodbsim
