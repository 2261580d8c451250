#pragma once

// Seeded randomness with platform-independent streams. Distributions are computed by hand from
// raw 64-bit draws because the standard distribution objects are implementation-defined.

#include "boson/fock.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace boson {

// One step of splitmix64; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

// Seed of sub-stream `stream` derived from a root seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
// Stable 64-bit hash of a stream name (FNV-1a).
std::uint64_t stream_id(std::string_view name);

class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t next_u64() { return engine_(); }
    // [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Standard normal (Box-Muller, second value cached).
    double normal();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Pure state over levels 0..dim-1 whose real and imaginary coefficient parts are uniform on
// [-1, 1] before normalization.
FockVector random_pure_state(Rng& rng, Index dim);

}  // namespace boson
