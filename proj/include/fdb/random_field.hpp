#pragma once

#include <cstdint>
#include <random>

#include "fdb/fft.hpp"
#include "fdb/grid.hpp"

namespace fdb {

// Deterministic band-limited random fields.  Generator: std::mt19937_64
// seeded directly with `seed`; uniforms are drawn as (x >> 11) * 2^-53 so the
// stream is bit-identical across standard libraries.  Modes 1..band (and the
// half-lattice in 2D) get amplitude |m|^-decay with a uniform random phase.
struct RandomFieldSpec {
    std::uint64_t seed = 1;
    double decay = 2.0;     // spectral slope p in |k|^-p
    long band = 10;         // largest active integer frequency
    double mean = 0.0;
    double amplitude = 1.0; // overall scale
};

namespace detail {

inline double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

inline RealField random_field(GridPtr g, const RandomFieldSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    Spectrum s(g->size(), Complex(0.0));
    if (g->dim == 1) {
        const long nhalf = static_cast<long>(g->n[0] / 2);
        const long band = std::min(spec.band, nhalf - 1);
        for (long m = 1; m <= band; ++m) {
            double amp = spec.amplitude * std::pow(static_cast<double>(m), -spec.decay);
            double phase = 2.0 * pi * detail::next_uniform(rng);
            Complex c = 0.5 * amp * std::exp(Complex(0.0, phase));
            s[static_cast<std::size_t>(m)] = c;
            s[g->n[0] - static_cast<std::size_t>(m)] = std::conj(c);
        }
    } else {
        const long h1 = static_cast<long>(g->n[0] / 2), h2 = static_cast<long>(g->n[1] / 2);
        const long b1 = std::min(spec.band, h1 - 1), b2 = std::min(spec.band, h2 - 1);
        auto bin = [&](long m1, long m2) {
            std::size_t i = m1 >= 0 ? static_cast<std::size_t>(m1)
                                    : g->n[0] - static_cast<std::size_t>(-m1);
            std::size_t j = m2 >= 0 ? static_cast<std::size_t>(m2)
                                    : g->n[1] - static_cast<std::size_t>(-m2);
            return g->idx(i, j);
        };
        // half lattice: m1 > 0, or m1 == 0 and m2 > 0; conjugate mirrors fill the rest
        for (long m1 = 0; m1 <= b1; ++m1) {
            for (long m2 = (m1 == 0 ? 1 : -b2); m2 <= b2; ++m2) {
                double kk = std::hypot(static_cast<double>(m1), static_cast<double>(m2));
                if (kk > static_cast<double>(spec.band)) continue;
                double amp = spec.amplitude * std::pow(kk, -spec.decay);
                double phase = 2.0 * pi * detail::next_uniform(rng);
                Complex c = 0.5 * amp * std::exp(Complex(0.0, phase));
                s[bin(m1, m2)] += c;
                s[bin(-m1, -m2)] += std::conj(c);
            }
        }
    }
    s[0] = Complex(spec.mean, 0.0);
    return to_field(g, s);
}

}  // namespace fdb
