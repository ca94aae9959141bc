#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace saig {

// All randomness flows through one seeded mt19937_64 so every pipeline stage is
// reproducible byte-for-byte. The helpers avoid std::uniform_int_distribution
// and friends, whose output sequences are not pinned by the standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform integer in [0, n), n > 0. Modulo bias is ~n/2^64, irrelevant here.
    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>(gen_() % n);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[next_below(static_cast<std::uint32_t>(i))]);
        }
    }

private:
    std::mt19937_64 gen_;
};

// Stable per-scene sub-seed so evaluation modes and budgets replay identical
// noise for the same (run seed, scene id) pair. SplitMix64 finalizer.
inline std::uint64_t scene_seed(std::uint64_t seed, std::uint64_t scene_id) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (scene_id + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace saig
