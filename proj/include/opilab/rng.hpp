#pragma once

// Seeded random streams for reproducible trials.
//
// The standard distributions (uniform_real_distribution, normal_distribution)
// are implementation-defined, so samples are drawn directly from the raw
// mt19937_64 output. Reports then stay byte-identical across standard
// libraries, not just across runs.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <string_view>

namespace opilab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Child seed for one cell of a suite. Depends only on its own coordinates, so
/// adding theorems or dims never perturbs existing cells.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(master ^ hash_tag(tag));
    for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 bits of resolution.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    bool coin() { return (engine_() >> 63) != 0; }

    /// Standard normal via Box-Muller.
    double normal() {
        double u1 = unit();
        while (u1 <= 0.0) u1 = unit();
        double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace opilab
