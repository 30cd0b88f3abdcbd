#pragma once

// Seeded random streams. Every ensemble draws from a substream keyed by
// (global seed, module tag, sample index) so adding samples never reshuffles
// the earlier ones.

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "qchaos/types.hpp"

namespace qchaos {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// FNV-1a of the tag, so substreams are keyed by readable names.
inline constexpr std::uint64_t tag_hash(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char ch : tag) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ tag_hash(tag)) + splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// mt19937_64 with Box-Muller normals and 53-bit uniforms, so draws do not
/// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::string_view tag, std::uint64_t index) : engine_(substream_seed(seed, tag, index)) {}

    /// Uniform in [0,1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(kTwoPi * u2);
        has_spare_ = true;
        return r * std::cos(kTwoPi * u2);
    }

    /// Standard complex Gaussian: E|z|^2 = 1.
    cplx complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace qchaos
