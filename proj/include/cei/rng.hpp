#pragma once

#include <cmath>
#include <cstdint>

namespace cei {

// splitmix64 finalizer: bijective avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based splittable stream: the pair (master_seed, stream_id) fully
// determines the sequence, so any path/worker indexed by stream_id reproduces
// its draws regardless of scheduling or batching.
struct rng_stream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    explicit rng_stream(std::uint64_t master = 0, std::uint64_t stream = 0)
        : master_seed(master), stream_id(stream) {
        state_ = mix64(mix64(master + 0x9E3779B97F4A7C15ull) +
                       0x9E3779B97F4A7C15ull * (stream + 1));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    // Uniform double in [0, 1), 53 random bits.
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform index in {0, ..., n-1}.
    int next_index(int n) {
        int k = static_cast<int>(next_uniform() * n);
        return k >= n ? n - 1 : k;
    }

    // Standard Gaussian via the Marsaglia polar method, with a cached spare.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double x, y, s;
        do {
            x = 2.0 * next_uniform() - 1.0;
            y = 2.0 * next_uniform() - 1.0;
            s = x * x + y * y;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = y * f;
        has_spare_ = true;
        return x * f;
    }

  private:
    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cei
