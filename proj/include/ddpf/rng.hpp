#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ddpf {

// splitmix64: stateless 64-bit mixer. Used to derive independent run seeds
// from (base_seed, point_index, run_index) so that growing a sweep never
// changes the seeds of runs that already existed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed for run r of sweep point p. Fixed rule: changing runs_per_point from R
// to R+1 leaves the first R seeds of every point unchanged, and distinct
// points never share a seed stream.
inline std::uint64_t run_seed(std::uint64_t base_seed,
                              std::uint64_t point_index,
                              std::uint64_t run_index) {
    std::uint64_t s = splitmix64(base_seed + 0x9E3779B97F4A7C15ULL * (point_index + 1));
    return splitmix64(s + 0xD1B54A32D192ED03ULL * (run_index + 1));
}

// Deterministic RNG wrapper. mt19937_64 has a standard-mandated sequence, and
// all derived draws (uniform doubles, bounded ints, shuffles) are implemented
// here by hand so results do not depend on the standard library's
// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0, 1), 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Modulo bias is ~n/2^64, irrelevant here.
    std::uint64_t bounded(std::uint64_t n) { return next_u64() % n; }

    // Fisher-Yates shuffle; consumes size()-1 bounded draws.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

} // namespace ddpf
