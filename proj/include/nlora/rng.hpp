// Copyright (c) 2026 the nlora-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace nlora {

/// Deterministic random source. mt19937_64 supplies the bit stream (its
/// output sequence is pinned by the standard), and all derived draws
/// (uniform doubles, Gaussians, ints, shuffles) are implemented here so the
/// same seed yields the same values on every platform and toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53 mantissa bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_uniform();
    }

    /// Standard normal via Box-Muller; one spare value is cached.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = 1.0 - next_uniform();
        const double u2 = next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform integer in [0, bound), bound >= 1, rejection-sampled.
    int next_int(int bound) {
        const std::uint64_t b = static_cast<std::uint64_t>(bound);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return static_cast<int>(v % b);
    }

    bool next_bernoulli(double p) { return next_uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_int(static_cast<int>(i)));
            std::swap(items[i - 1], items[j]);
        }
    }

    std::vector<int> permutation(int n) {
        std::vector<int> p(n);
        for (int i = 0; i < n; ++i) p[i] = i;
        shuffle(p);
        return p;
    }

    /// splitmix64 step, used to derive independent stream seeds.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
        return mix(mix(seed, stream), index);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stream tags for derived seeds. Values are arbitrary but frozen: changing
// them changes every seeded artifact.
namespace seed_stream {
inline constexpr std::uint64_t kAdapterInit = 0x01;
inline constexpr std::uint64_t kShuffle = 0x02;
inline constexpr std::uint64_t kCenters = 0x03;
inline constexpr std::uint64_t kRotation = 0x04;
inline constexpr std::uint64_t kLabelPerm = 0x05;
inline constexpr std::uint64_t kTrainSamples = 0x06;
inline constexpr std::uint64_t kTestSamples = 0x07;
inline constexpr std::uint64_t kPretrain = 0x08;
inline constexpr std::uint64_t kTrial = 0x09;
inline constexpr std::uint64_t kOrderShuffle = 0x0a;
inline constexpr std::uint64_t kSuite = 0x0b;
inline constexpr std::uint64_t kTuneSuite = 0x0c;
}  // namespace seed_stream

}  // namespace nlora
