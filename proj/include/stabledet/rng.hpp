#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "math.hpp"

namespace stabledet {

// Primitive variate generators built on the raw 64-bit engine output.
// std::uniform_real_distribution and friends are implementation-defined,
// so rolling the few transforms we need keeps results byte-identical for
// a given seed on any standard library.

/// Uniform double in (0,1); never returns 0 or 1.
template <class Engine>
double canon_open(Engine& eng) {
    for (;;) {
        double u = static_cast<double>(eng() >> 11) * 0x1p-53;
        if (u > 0.0 && u < 1.0) return u;
    }
}

/// Uniform double in (lo, hi).
template <class Engine>
double uniform_open(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * canon_open(eng);
}

/// Exp(1) variate, strictly positive.
template <class Engine>
double exponential(Engine& eng) {
    return -std::log(canon_open(eng));
}

/// Standard normal via Box-Muller (one variate per call; no state kept).
template <class Engine>
double standard_normal(Engine& eng) {
    double u1 = canon_open(eng);
    double u2 = canon_open(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

/// Poisson count by accumulating unit-exponential arrivals until the mean
/// elapses. O(mean) per draw, which is fine for the field sizes we simulate.
template <class Engine>
std::uint64_t poisson_count(Engine& eng, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("poisson_count: mean must be finite and >= 0");
    std::uint64_t n = 0;
    double elapsed = exponential(eng);
    while (elapsed <= mean) {
        ++n;
        elapsed += exponential(eng);
    }
    return n;
}

} // namespace stabledet
