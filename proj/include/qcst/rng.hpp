#pragma once

#include <cstdint>
#include <complex>
#include <initializer_list>
#include <random>

#include "qcst/errors.hpp"

namespace qcst {

/// SplitMix64 step (Steele, Lea & Flood 2014). Used only to mix seeds and
/// derive independent stream seeds from (master_seed, key...) tuples.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic random stream.
///
/// Generator: std::mt19937_64 (sequence and seeding pinned by the C++
/// standard). Floating-point sampling is done by hand so the produced values
/// are identical on every platform:
///   - uniform01: top 53 bits of one output, scaled by 2^-53 -> [0, 1)
///   - uniform_below: unbiased rejection sampling
///   - gaussian pairs: Box-Muller on two uniforms
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    /// Derive a stream from a master seed plus a list of keys (for example
    /// {strategy, m, trial_index}). Each key is folded through splitmix64 so
    /// nearby tuples give unrelated streams.
    static RngStream derive(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
        std::uint64_t s = master;
        std::uint64_t mixed = splitmix64(s);
        for (std::uint64_t k : keys) {
            s ^= k + 0x9e3779b97f4a7c15ull + (s << 6) + (s >> 2);
            mixed = splitmix64(s);
        }
        return RngStream(mixed);
    }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw InvalidInputError("uniform_below: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = gen_();
        } while (r >= limit);
        return r % n;
    }

    /// Standard complex Gaussian: re and im independent N(0,1).
    /// One Box-Muller pair per call; nothing is cached between calls.
    std::complex<double> complex_gaussian() {
        double u1 = 1.0 - uniform01(); // (0, 1]
        double u2 = uniform01();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * 3.14159265358979323846 * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

private:
    std::mt19937_64 gen_;
};

} // namespace qcst
