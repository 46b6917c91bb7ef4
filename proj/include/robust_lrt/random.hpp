#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace robust_lrt {

// Seeded stream with transforms written out explicitly, so draws do not
// depend on the standard library's distribution implementations.
class Random {
public:
    explicit Random(std::uint64_t seed): engine_(mix(seed)) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_open_left() { return 1.0 - uniform(); }

    std::uint64_t next() { return engine_(); }

    std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n; }

    // Box-Muller; one normal per pair of uniforms.
    double normal() {
        const double r = std::sqrt(-2.0 * std::log(uniform_open_left()));
        return r * std::cos(2.0 * std::numbers::pi * uniform());
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    double rayleigh(double sigma) { return sigma * std::sqrt(-2.0 * std::log(uniform_open_left())); }

    // Independent child stream, e.g. one per view.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        return mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL));
    }

private:
    // SplitMix64 finalizer.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

} // namespace robust_lrt
