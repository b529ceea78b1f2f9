#pragma once

#include <cstdint>
#include <random>

namespace ehnet {

/// SplitMix64 finalizer; used to decorrelate user seeds before they reach the
/// Mersenne Twister and to derive per-run stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for the k-th independent run derived from a base seed.
constexpr std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return splitmix64(base_seed + index);
}

/// Portable random source. std::mt19937_64 has a standard-mandated output
/// sequence; uniforms are built from its top 53 bits rather than through
/// std::uniform_real_distribution, whose algorithm is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Uniform on [0, 1).
    double uniform() noexcept {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_u64() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace ehnet
