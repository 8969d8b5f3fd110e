#pragma once

#include <cstdint>
#include <random>

namespace nnspod {

/// mt19937_64 with hand-rolled draws so streams are identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(unsigned long long seed) : gen_(seed) {}

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n) without modulo bias.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % n;
    }

    template <typename It>
    void shuffle(It first, It last) {
        const auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i)
            std::swap(first[i - 1], first[next_below(i)]);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace nnspod
