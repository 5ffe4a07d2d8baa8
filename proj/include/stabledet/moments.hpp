#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "math.hpp"
#include "stable.hpp"

namespace stabledet {

/// The statistic a sample-mean detector averages over the observation window:
/// |y|^p, sign(y)|y|^p, or log|y|.
struct StatKind {
    enum class Family { flom, signed_flom, log_abs };
    Family family;
    double p; // unused for log_abs

    static StatKind flom(double p) { return {Family::flom, p}; }
    static StatKind signed_flom(double p) { return {Family::signed_flom, p}; }
    static StatKind log_abs() { return {Family::log_abs, 0.0}; }

    double apply(double y) const {
        switch (family) {
        case Family::flom: return std::pow(std::abs(y), p);
        case Family::signed_flom: {
            double v = std::pow(std::abs(y), p);
            return y < 0.0 ? -v : (y > 0.0 ? v : 0.0);
        }
        default: return std::log(std::max(std::abs(y), 1e-300));
        }
    }
};

namespace detail {

// The closed forms below hold for mu = 0 and alpha < 2; at alpha = 1 the skew
// kernel tan(pi alpha/2) blows up, so only beta = 0 is representable there.
inline void check_moment_params(const StableParams& q, const char* who) {
    if (q.mu != 0.0)
        throw std::invalid_argument(std::string(who) + ": formulas require mu = 0");
    if (!(q.alpha < 2.0))
        throw std::invalid_argument(std::string(who) + ": formulas require alpha < 2");
    if (q.alpha == 1.0 && q.beta != 0.0)
        throw std::invalid_argument(std::string(who) + ": alpha = 1 supported only for beta = 0");
}

} // namespace detail

/// E[|Y|^p] for 0 < p < alpha:
///   Gamma(1-p/alpha) / (Gamma(1-p) cos(p pi/2)) *
///   (1 + beta^2 tan^2(alpha pi/2))^{p/(2 alpha)} cos((p/alpha) arctan(beta tan(alpha pi/2))) * sigma^p.
/// Even in beta and increasing in |beta|.
inline double flom_mean(const StableParams& q, double p) {
    detail::check_moment_params(q, "flom_mean");
    if (!(p > 0.0 && p < q.alpha))
        throw std::invalid_argument("flom_mean: requires 0 < p < alpha");
    double g = std::tgamma(1.0 - p / q.alpha) /
               (std::tgamma(1.0 - p) * std::cos(p * pi / 2.0)) * std::pow(q.sigma, p);
    if (q.beta == 0.0) return g;
    double eta = std::tan(pi * q.alpha / 2.0);
    double be = q.beta * eta;
    return g * std::pow(1.0 + be * be, p / (2.0 * q.alpha)) *
           std::cos((p / q.alpha) * std::atan(be));
}

/// E[sign(Y)|Y|^p], the odd counterpart: same prefactor with sin in place of cos.
/// Zero at beta = 0, odd in beta.
inline double signed_flom_mean(const StableParams& q, double p) {
    detail::check_moment_params(q, "signed_flom_mean");
    if (!(p > 0.0 && p < q.alpha))
        throw std::invalid_argument("signed_flom_mean: requires 0 < p < alpha");
    if (q.beta == 0.0) return 0.0;
    double eta = std::tan(pi * q.alpha / 2.0);
    double be = q.beta * eta;
    return std::tgamma(1.0 - p / q.alpha) /
           (std::tgamma(1.0 - p) * std::sin(p * pi / 2.0)) * std::pow(q.sigma, p) *
           std::pow(1.0 + be * be, p / (2.0 * q.alpha)) *
           std::sin((p / q.alpha) * std::atan(be));
}

/// Mean and variance of log|Y|:
///   mean = C_e (1/alpha - 1) + log sigma + log(1 + beta^2 tan^2(alpha pi/2)) / (2 alpha)
///   var  = pi^2/12 + pi^2/(6 alpha^2) - arctan^2(beta tan(alpha pi/2)) / alpha^2.
inline std::pair<double, double> log_moments(const StableParams& q) {
    detail::check_moment_params(q, "log_moments");
    double be = q.beta == 0.0 ? 0.0 : q.beta * std::tan(pi * q.alpha / 2.0);
    double mean = euler_gamma * (1.0 / q.alpha - 1.0) + std::log(q.sigma) +
                  std::log1p(be * be) / (2.0 * q.alpha);
    double th = std::atan(be);
    double var = pi * pi / 12.0 + pi * pi / (6.0 * q.alpha * q.alpha) -
                 th * th / (q.alpha * q.alpha);
    return {mean, var};
}

/// Per-sample variance of the averaged statistic. Requires p < alpha/2 so the
/// second moment exists. For the signed statistic the second moment is
/// E[|Y|^{2p}], since (sign(y)|y|^p)^2 = |y|^{2p}; `signed_second_moment_as_signed`
/// reproduces the variant that plugs in the signed moment E[Y^{<2p>}] instead,
/// kept only for comparison (it is not a variance).
inline double statistic_variance(StatKind kind, const StableParams& q,
                                 bool signed_second_moment_as_signed = false) {
    switch (kind.family) {
    case StatKind::Family::flom: {
        if (!(kind.p > 0.0 && kind.p < q.alpha / 2.0))
            throw std::invalid_argument("statistic_variance: requires 0 < p < alpha/2");
        double m = flom_mean(q, kind.p);
        return flom_mean(q, 2.0 * kind.p) - m * m;
    }
    case StatKind::Family::signed_flom: {
        if (!(kind.p > 0.0 && kind.p < q.alpha / 2.0))
            throw std::invalid_argument("statistic_variance: requires 0 < p < alpha/2");
        double m = signed_flom_mean(q, kind.p);
        double second = signed_second_moment_as_signed
                            ? signed_flom_mean(q, 2.0 * kind.p)
                            : flom_mean(q, 2.0 * kind.p);
        return second - m * m;
    }
    default:
        return log_moments(q).second;
    }
}

/// Covariance of (|Y|^{p1}, sign(Y)|Y|^{p2}):
///   cov = E[Y^{<p1+p2>}] - E[|Y|^{p1}] E[Y^{<p2>}],  valid for p1 + p2 < alpha/2.
inline double mixed_covariance(const StableParams& q, double p1, double p2) {
    detail::check_moment_params(q, "mixed_covariance");
    if (!(p1 > 0.0 && p2 > 0.0 && p1 + p2 < q.alpha / 2.0))
        throw std::invalid_argument("mixed_covariance: requires p1, p2 > 0 and p1 + p2 < alpha/2");
    if (q.beta == 0.0) return 0.0;
    return signed_flom_mean(q, p1 + p2) - flom_mean(q, p1) * signed_flom_mean(q, p2);
}

} // namespace stabledet
