#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace grank {

// Counter-based keyed rng. Every (seed, key...) tuple opens an independent,
// platform-stable stream, so split variants and per-user sampling can run in
// any order or in parallel and still reproduce bit-identically.
class KeyedRng {
public:
    explicit KeyedRng(std::uint64_t seed, std::uint64_t k1 = 0, std::uint64_t k2 = 0,
                      std::uint64_t k3 = 0) {
        state_ = mix(seed + 0x9E3779B97F4A7C15ULL);
        state_ = mix(state_ ^ mix(k1 + 0xBF58476D1CE4E5B9ULL));
        state_ = mix(state_ ^ mix(k2 + 0x94D049BB133111EBULL));
        state_ = mix(state_ ^ mix(k3 + 0xD6E8FEB86659FD93ULL));
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // uniform in [0, 1), 53-bit resolution
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double normal() {
        // Box-Muller, no cached spare: two draws per call keeps replay trivial
        double u1 = unit();
        double u2 = unit();
        while (u1 == 0.0) u1 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return x;
    }

private:
    std::uint64_t state_;
};

// First k entries of a Fisher-Yates pass over [0, n): a uniform k-subset in
// uniform random order.
inline std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k,
                                                             KeyedRng& rng) {
    std::vector<std::uint32_t> idx(n);
    for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
    if (k > n) k = n;
    for (std::uint32_t t = 0; t < k; ++t) {
        std::uint64_t j = t + rng.below(n - t);
        std::swap(idx[t], idx[j]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace grank
