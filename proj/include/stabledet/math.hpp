#pragma once

#include <cmath>
#include <cstdint>

namespace stabledet {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double euler_gamma = 0.57721566490153286061;

/// Upper-tail probability of the standard Gaussian, Q(x) = P(N(0,1) > x),
/// evaluated through erfc (no series approximation).
inline double q_function(double x) {
    return 0.5 * std::erfc(x / 1.41421356237309505);
}

/// Kahan-compensated accumulator for long sums of doubles.
class CompensatedSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

/// One splitmix64 step; used only for seed derivation, not as a stream.
inline std::uint64_t splitmix64_once(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic seed tree: child seed from a parent seed and an index.
/// Children of distinct (parent, index) pairs are statistically independent,
/// so worker/trial streams never overlap by construction.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return splitmix64_once(parent ^ splitmix64_once(index + 0x9e3779b97f4a7c15ULL));
}

} // namespace stabledet
