#pragma once

#include <cmath>
#include <cstdint>

namespace smd {

// splitmix64 mixer; also the seed-splitting rule for replicas and
// per-sample streams: stream i of root seed s starts at mix64(s ^ i).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t split_seed(std::uint64_t root, std::uint64_t index) {
    return mix64(root ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

// Counter-based generator. Every draw is a pure function of the state,
// so traces are reproducible bit-for-bit for a fixed seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // Box-Muller without the cached spare: two uniforms per draw keeps the
    // value a pure function of the consumed state.
    double normal() {
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::uint64_t state_;
};

}  // namespace smd
