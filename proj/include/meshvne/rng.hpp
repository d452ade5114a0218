#pragma once

// Deterministic random streams. A master seed plus a label yields an
// independent substream, so workload randomness and allocator randomness
// never interleave and every run is reproducible bit-for-bit.

#include <cstdint>
#include <random>
#include <string_view>

namespace meshvne {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(detail::splitmix64(seed)) {}

    static Rng stream(std::uint64_t master_seed, std::string_view label) {
        return Rng(detail::splitmix64(master_seed) ^ detail::fnv1a(label));
    }

    std::uint64_t bits() { return gen_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % range;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return lo + static_cast<std::int64_t>(v % range);
    }

    bool coin(double p_true) { return uniform() < p_true; }

    double exponential(double mean) { return -mean * std::log(1.0 - uniform()); }

  private:
    std::mt19937_64 gen_;
};

}  // namespace meshvne
