#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>

namespace toposon {

/// Seeded random stream shared by every stochastic step of a scenario.
///
/// All draws go through one engine in a fixed call order, so a scenario run
/// with the same seed reproduces bit-for-bit on the same build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    double normal(double mean, double stddev) { return std::normal_distribution<double>(mean, stddev)(engine_); }

    /// Uniform index in [0, n). n must be positive.
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

    /// Uniform integer in the closed range [lo, hi].
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    std::uint64_t poisson(double mean)
    {
        if (mean <= 0.0) return 0;
        return std::poisson_distribution<std::uint64_t>(mean)(engine_);
    }

    // Fisher-Yates with our own index draws; std::shuffle's draw pattern is
    // implementation-defined.
    template <class RandomIt>
    void shuffle(RandomIt first, RandomIt last)
    {
        const auto n = static_cast<std::size_t>(last - first);
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = index(i);
            using std::swap;
            swap(first[i - 1], first[j]);
        }
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace toposon
