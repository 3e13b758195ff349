// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace lmp {

// Stateless 64-bit mixer used to derive substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random stream. The generator (mt19937_64) and every
// sampling transform below are fully specified, so sequences are
// reproducible across platforms and independent of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Derives a named substream: the same (seed, path) always yields the
    // same stream, and distinct paths decorrelate.
    static Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t s = splitmix64(seed);
        for (std::uint64_t p : path)
            s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
        return Rng(s);
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi], inclusive, bias-free.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t range = hi - lo + 1;
        if (range == 0) return gen_();  // full 64-bit range
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return lo + v % range;
    }

    int index(int n) { return static_cast<int>(uniform_int(0, static_cast<std::uint64_t>(n) - 1)); }

    // Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> cnormal(double variance) {
        const double s = std::sqrt(variance * 0.5);
        return {s * normal(), s * normal()};
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace lmp
