// Seeded random number generation with independent substreams.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace glauber {

/// Identifies one reproducible random stream. The same (seed, stream)
/// pair always yields the same draw sequence.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Collapses (seed, stream) into a single 64-bit engine seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (stream * 0xD1B54A32D192ED03ULL);
    return splitmix64(s);
}

inline RngSeed substream(RngSeed base, std::uint64_t offset) {
    return RngSeed{base.seed, base.stream + offset};
}

/// mt19937_64 wrapped with hand-rolled draw functions so that results do
/// not depend on the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(RngSeed s) : engine_(mix_seed(s.seed, s.stream)) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix_seed(seed, stream)) {}

    /// Uniform on the open interval (0, 1); never returns an endpoint.
    double uniform01() {
        return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
    }

    /// Exponential with the given rate; strictly positive.
    double exponential(double rate) {
        return -std::log(uniform01()) / rate;
    }

    /// Uniform integer in [0, n).
    std::uint32_t below(std::uint32_t n) {
        // Lemire's multiply-shift with rejection for exact uniformity.
        std::uint64_t x = engine_() >> 32;
        std::uint64_t m = x * n;
        std::uint32_t low = static_cast<std::uint32_t>(m);
        if (low < n) {
            const std::uint32_t threshold = (0u - n) % n;
            while (low < threshold) {
                x = engine_() >> 32;
                m = x * n;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// +1 with probability p_plus, otherwise -1.
    std::int8_t spin(double p_plus) { return bernoulli(p_plus) ? std::int8_t{1} : std::int8_t{-1}; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace glauber
