#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hcrep {

/// Seeded randomness for folds and synthetic data. The mt19937_64 engine is
/// fully specified by the standard, but the library distributions and
/// std::shuffle are not, so the draws that shape reproducible artifacts
/// (fold layouts, generated datasets) are derived here by hand.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, n): rejection sampling, no modulo bias.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (true) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    /// Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Fisher-Yates, swapping from the back.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i)
            std::swap(values[i - 1], values[bounded(i)]);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace hcrep
