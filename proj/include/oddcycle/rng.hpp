#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace oddcycle {

// SplitMix64 (Steele, Lea, Flood 2014): 64-bit state, increment by the golden
// gamma 0x9E3779B97F4A7C15, output through the Stafford variant-13 mixer.
// All generators and samplers in this library draw from this stream through
// the helpers below, never through <random> distributions, so that a seed
// yields the same graph on every platform and standard library.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, bound); bound must be positive. Lemire's
    // multiply-shift with rejection, so the result is unbiased.
    std::uint64_t below(std::uint64_t bound) noexcept {
        __uint128_t product = static_cast<__uint128_t>(next()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<__uint128_t>(next()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double prob) noexcept { return uniform() < prob; }

    template <typename T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

// Independent stream for sub-task `index` of a run seeded with `seed`; used for
// per-trial seeding so parallel schedules reproduce sequential results.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    mixer.next();
    return mixer.next();
}

}  // namespace oddcycle
