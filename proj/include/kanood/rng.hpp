#pragma once

#include <cstdint>
#include <cmath>

// Deterministic random streams. std::mt19937_64 is fully specified by the
// standard, but the <random> distributions are not; sampling is done by hand
// so that identical seeds give identical weights on every platform.

namespace kanood {

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent stream seed for (seed, stream_id) pairs, e.g. one per partition.
inline uint64_t derive_seed(uint64_t seed, uint64_t stream_id) {
    uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    splitmix64(s);
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {
        // burn-in decorrelates near-identical seeds
        next_u64();
        next_u64();
    }

    uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller (cached second draw)
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        // u1 in (0, 1] keeps the log finite
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // uniform integer in [0, n)
    uint64_t next_below(uint64_t n) {
        // multiply-shift; bias is negligible for n << 2^64 and keeps the
        // stream platform-independent
        return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    template <typename T>
    void shuffle(T* data, size_t n) {
        // Fisher-Yates, hand-rolled: std::shuffle is implementation-defined
        for (size_t i = n; i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            T tmp = data[i - 1];
            data[i - 1] = data[j];
            data[j] = tmp;
        }
    }

private:
    uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace kanood
