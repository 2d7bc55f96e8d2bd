#ifndef WTAIL_RNG_HPP
#define WTAIL_RNG_HPP

#include <cstdint>
#include <random>
#include <string>

namespace wtail {

/// Replication streams: each replication r draws from an independent
/// mt19937_64 engine seeded with splitmix64(seed + (r+1) * golden-gamma).
/// Uniforms map a 64-bit draw to the open interval (0,1) via
/// ((u >> 11) + 0.5) * 2^-53, which never returns an endpoint. Each
/// observation consumes exactly three draws, in the order X, U, V, so a
/// replication's sample does not depend on whether other replications run.
struct ReplicationRng {
    explicit ReplicationRng(std::uint64_t seed, std::uint64_t rep = 0)
        : engine(derive_seed(seed, rep)) {}

    double uniform01() {
        return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
    }

    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t rep) {
        std::uint64_t z = seed + (rep + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static std::string identity() {
        return "mt19937_64 per replication; engine seed = splitmix64(seed + "
               "(rep+1)*0x9E3779B97F4A7C15); u01 = ((draw>>11)+0.5)*2^-53; "
               "three draws per observation (X, U, V)";
    }

    std::mt19937_64 engine;
};

}  // namespace wtail

#endif
