#pragma once
#include <cstdint>
#include <cmath>

#include "catsim/math_util.hpp"

// Deterministic random streams for the simulator.
//
// Every random draw in a run is taken from a Stream keyed by (master seed,
// purpose tag, time-step, agent id). Streams are independent of evaluation
// order and of how much logging happens between draws, which is what makes
// traces reproducible byte for byte from a single seed.

namespace catsim {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Purpose tags for substream derivation. Values are part of the trace
// format: renumbering changes every sampled trajectory.
enum class StreamTag : std::uint64_t {
    Catastrophe = 1,
    InitIndividual = 2,
    InitInsurer = 3,
    IndividualStep = 4,
    InsurerEntry = 5,
    EpisodeSeed = 6,
    PolicySelect = 7,
    Generic = 8,
};

class Stream {
public:
    explicit Stream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform on [0, 1); never returns 1.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    bool bernoulli(double p) { return next_double() < p; }

    // Normal draw via inverse CDF so it costs exactly one uniform.
    double normal(double mu, double sigma) {
        // Offset keeps the argument strictly inside (0,1).
        double u = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
        return mu + sigma * normal_quantile(u);
    }

private:
    std::uint64_t state_;
};

// Derives an independent stream from the master seed and up to three keys.
inline Stream substream(std::uint64_t seed, StreamTag tag,
                        std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = seed;
    std::uint64_t x = splitmix64(s);
    s ^= static_cast<std::uint64_t>(tag) * 0xA24BAED4963EE407ULL;
    x ^= splitmix64(s);
    s ^= (a + 1) * 0x9FB21C651E98DF25ULL;
    x ^= splitmix64(s);
    s ^= (b + 1) * 0xD6E8FEB86659FD93ULL;
    x ^= splitmix64(s);
    return Stream(x);
}

} // namespace catsim
