#pragma once

#include "csdf/core.hpp"

#include <cstdint>

namespace csdf {

// Counter-based random streams. Every consumer derives an independent stream
// from (seed, purpose tag, index), so results never depend on evaluation
// order or thread count.

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(s);
}

} // namespace detail

struct RngSeed {
    std::uint64_t value = 0;
};

class StreamRng {
public:
    StreamRng(RngSeed seed, std::uint64_t stream_tag, std::uint64_t index) {
        state_ = detail::mix(detail::mix(seed.value, stream_tag), index);
    }

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_double(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    Vec3 next_in_box(const BoundingBox& b) {
        return {next_double(b.min.x, b.max.x),
                next_double(b.min.y, b.max.y),
                next_double(b.min.z, b.max.z)};
    }

    // Standard normal via Box-Muller; draws two uniforms per call.
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

private:
    std::uint64_t state_;
};

// Stream tags; one per independent consumer of randomness.
namespace rng_tag {
inline constexpr std::uint64_t kUniformPoints   = 0x01;
inline constexpr std::uint64_t kNearSurface     = 0x02;
inline constexpr std::uint64_t kMiningResample  = 0x03;
inline constexpr std::uint64_t kMeshSampling    = 0x04;
inline constexpr std::uint64_t kVolumeSampling  = 0x05;
inline constexpr std::uint64_t kMlpInit         = 0x06;
inline constexpr std::uint64_t kSynthJitter     = 0x07;
} // namespace rng_tag

// Derive a child seed, e.g. per resample round or per scene instance.
inline RngSeed derive_seed(RngSeed base, std::uint64_t tag, std::uint64_t index) {
    return RngSeed{detail::mix(detail::mix(base.value, tag), index)};
}

} // namespace csdf
