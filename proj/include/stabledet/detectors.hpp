#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "math.hpp"
#include "moments.hpp"
#include "poisson_field.hpp"
#include "stable_pdf.hpp"

namespace stabledet {

// Detector bank for the skewed-signal-in-symmetric-interference problem.
// The moment detectors treat the averaged statistic as Gaussian under each
// hypothesis (CLT across the L samples) and apply the corresponding
// likelihood-ratio test; the ML detector evaluates the exact stable densities.

struct Decision {
    bool is_h1;       // verdict; ties (statistic == 0) go to H0
    double statistic; // the log-likelihood-ratio value
};

inline void check_observation(const std::vector<double>& obs) {
    if (obs.empty())
        throw std::invalid_argument("observation must contain at least one sample");
    for (double y : obs)
        if (!std::isfinite(y))
            throw std::invalid_argument("observation samples must all be finite");
}

/// Gaussian approximation of one averaged statistic under both hypotheses.
/// Variances are those of the L-sample average, i.e. already divided by L.
struct MomentSummary {
    double mu_h0;
    double mu_h1;
    double var_h0;
    double var_h1;
    std::size_t l;
    double prior_h1 = 0.5;
};

inline MomentSummary summarize(StatKind kind, const StableParams& h0, const StableParams& h1,
                               std::size_t l, double prior_h1 = 0.5) {
    if (l == 0) throw std::invalid_argument("summarize: L must be >= 1");
    if (!(prior_h1 > 0.0 && prior_h1 < 1.0))
        throw std::invalid_argument("summarize: prior must lie in (0, 1)");
    double mu0, mu1;
    switch (kind.family) {
    case StatKind::Family::flom:
        mu0 = flom_mean(h0, kind.p);
        mu1 = flom_mean(h1, kind.p);
        break;
    case StatKind::Family::signed_flom:
        mu0 = signed_flom_mean(h0, kind.p);
        mu1 = signed_flom_mean(h1, kind.p);
        break;
    case StatKind::Family::log_abs:
        mu0 = log_moments(h0).first;
        mu1 = log_moments(h1).first;
        break;
    default:
        throw std::logic_error("summarize: unknown statistic kind");
    }
    double ln = static_cast<double>(l);
    return {mu0, mu1, statistic_variance(kind, h0) / ln, statistic_variance(kind, h1) / ln,
            l, prior_h1};
}

inline MomentSummary summarize(StatKind kind, const HypothesisModel& model, std::size_t l) {
    return summarize(kind, model.h0_params(), model.h1_params(), l, model.prior_h1);
}

class NoRealRootError : public std::runtime_error {
public:
    explicit NoRealRootError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Roots of a x^2 + 2 b x + c with disc = b^2 - a c >= 0, a != 0, in a
// cancellation-safe form; returned sorted.
inline std::pair<double, double> quad_roots(double a, double b, double c, double disc) {
    double q = -(b + std::copysign(std::sqrt(disc), b));
    double r1, r2;
    if (q == 0.0) {
        r1 = r2 = 0.0; // b == 0 and disc == 0
    } else {
        r1 = q / a;
        r2 = c / q;
    }
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2};
}

/// P(a < X < b) for X ~ N(mean, sd^2); a, b may be infinite.
inline double gauss_interval_prob(double a, double b, double mean, double sd) {
    if (!(a < b)) return 0.0;
    double qa = a == -std::numeric_limits<double>::infinity() ? 1.0
                                                              : q_function((a - mean) / sd);
    double qb = b == std::numeric_limits<double>::infinity() ? 0.0
                                                             : q_function((b - mean) / sd);
    return std::max(0.0, qa - qb);
}

} // namespace detail

/// Decision region of the 1-d Gaussian LRT, reduced to an interval: verdict
/// is H1 iff Z lies strictly inside (outside) (t1, t2). Linear cases use an
/// infinite endpoint; `none` means the statistic is identically zero and
/// every observation ties to H0.
struct Thresholds1D {
    enum class H1Region { inside, outside, none };
    double t1;
    double t2;
    H1Region region;
};

namespace detail {

struct Quad1D {
    double a, b, c; // T(z) = (a z^2 + 2 b z + c) / 2
};

inline Quad1D lrt_coeffs(const MomentSummary& s) {
    if (!(s.var_h0 > 0.0) || !(s.var_h1 > 0.0))
        throw std::invalid_argument("summary variances must be positive");
    double prior_offset = 2.0 * std::log(s.prior_h1 / (1.0 - s.prior_h1));
    return {1.0 / s.var_h0 - 1.0 / s.var_h1,
            s.mu_h1 / s.var_h1 - s.mu_h0 / s.var_h0,
            s.mu_h0 * s.mu_h0 / s.var_h0 - s.mu_h1 * s.mu_h1 / s.var_h1 +
                std::log(s.var_h0 / s.var_h1) + prior_offset};
}

} // namespace detail

inline Thresholds1D thresholds_1d(const MomentSummary& s) {
    auto [a, b, c] = detail::lrt_coeffs(s);
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (a == 0.0) {
        if (b == 0.0) {
            // flat ratio: the prior offset alone decides
            if (c > 0.0) return {-inf, inf, Thresholds1D::H1Region::inside};
            return {0.0, 0.0, Thresholds1D::H1Region::none};
        }
        double t = -c / (2.0 * b);
        return b > 0.0 ? Thresholds1D{t, inf, Thresholds1D::H1Region::inside}
                       : Thresholds1D{-inf, t, Thresholds1D::H1Region::inside};
    }
    double disc = b * b - a * c;
    if (disc < 0.0)
        throw NoRealRootError("thresholds_1d: likelihood ratio has no real roots");
    auto [t1, t2] = detail::quad_roots(a, b, c, disc);
    return {t1, t2,
            a > 0.0 ? Thresholds1D::H1Region::outside : Thresholds1D::H1Region::inside};
}

inline Decision lrt_1d(const std::vector<double>& obs, StatKind kind,
                       const MomentSummary& s) {
    check_observation(obs);
    if (obs.size() != s.l)
        throw std::invalid_argument("lrt_1d: observation length does not match summary");
    CompensatedSum acc;
    for (double y : obs) acc.add(kind.apply(y));
    double z = acc.value() / static_cast<double>(obs.size());
    auto [a, b, c] = detail::lrt_coeffs(s);
    double t = 0.5 * (a * z * z + 2.0 * b * z + c);
    return {t > 0.0, t};
}

/// Error probability of the 1-d Gaussian LRT under the summary's own
/// Gaussian approximation, weighted by the priors.
inline double theoretical_pe_1d(const MomentSummary& s) {
    Thresholds1D th = thresholds_1d(s);
    double p_h1_h0, p_h1_h1; // P(decide H1 | Hk)
    switch (th.region) {
    case Thresholds1D::H1Region::none:
        p_h1_h0 = p_h1_h1 = 0.0;
        break;
    case Thresholds1D::H1Region::inside:
        p_h1_h0 = detail::gauss_interval_prob(th.t1, th.t2, s.mu_h0, std::sqrt(s.var_h0));
        p_h1_h1 = detail::gauss_interval_prob(th.t1, th.t2, s.mu_h1, std::sqrt(s.var_h1));
        break;
    case Thresholds1D::H1Region::outside:
    default:
        p_h1_h0 =
            1.0 - detail::gauss_interval_prob(th.t1, th.t2, s.mu_h0, std::sqrt(s.var_h0));
        p_h1_h1 =
            1.0 - detail::gauss_interval_prob(th.t1, th.t2, s.mu_h1, std::sqrt(s.var_h1));
        break;
    }
    double pe = (1.0 - s.prior_h1) * p_h1_h0 + s.prior_h1 * (1.0 - p_h1_h1);
    return std::clamp(pe, 0.0, 1.0);
}

/// Symmetric 2x2 matrix.
struct Mat2 {
    double a11, a12, a22;

    double det() const { return a11 * a22 - a12 * a12; }
    Mat2 inverse() const {
        double d = det();
        if (d == 0.0) throw std::invalid_argument("Mat2: singular matrix");
        return {a22 / d, -a12 / d, a11 / d};
    }
    /// Ratio of eigenvalue magnitudes (assumes symmetric).
    double condition() const {
        double half_tr = 0.5 * (a11 + a22);
        double disc = std::sqrt(std::max(0.0, half_tr * half_tr - det()));
        double hi = std::abs(half_tr + disc), lo = std::abs(half_tr - disc);
        if (hi < lo) std::swap(hi, lo);
        return lo == 0.0 ? std::numeric_limits<double>::infinity() : hi / lo;
    }
    bool positive_definite() const { return a11 > 0.0 && det() > 0.0; }
};

class IllConditionedError : public std::runtime_error {
public:
    IllConditionedError(const std::string& what, double condition)
        : std::runtime_error(what), condition(condition) {}
    double condition;
};

/// Bivariate Gaussian approximation of the (|Y|^p1, Y^<p2>) average pair.
/// m_* are the true covariance matrices of the averages; c_* are the ones
/// the detector uses (equal to m_*, or their diagonals in independence
/// mode). Error probabilities are always measured under m_*.
struct BivariateSummary {
    double mu_h0[2];
    double mu_h1[2];
    Mat2 m_h0, m_h1;
    Mat2 c_h0, c_h1;
    bool independence_mode;
    double p1, p2;
    std::size_t l;
    double prior_h1 = 0.5;
};

inline BivariateSummary summarize_mixed(const StableParams& h0, const StableParams& h1,
                                        double p1, double p2, std::size_t l,
                                        bool independence_mode = false,
                                        double condition_limit = 1e12, double prior_h1 = 0.5) {
    if (l == 0) throw std::invalid_argument("summarize_mixed: L must be >= 1");
    if (!(prior_h1 > 0.0 && prior_h1 < 1.0))
        throw std::invalid_argument("summarize_mixed: prior must lie in (0, 1)");
    if (!(p1 > 0.0) || !(p2 > 0.0) || !(p1 + p2 < std::min(h0.alpha, h1.alpha) / 2.0))
        throw std::invalid_argument("summarize_mixed: need p1, p2 > 0 and p1 + p2 < alpha/2");
    double ln = static_cast<double>(l);
    auto cov_of = [&](const StableParams& q) {
        return Mat2{statistic_variance(StatKind::flom(p1), q) / ln,
                    mixed_covariance(q, p1, p2) / ln,
                    statistic_variance(StatKind::signed_flom(p2), q) / ln};
    };
    BivariateSummary s{{flom_mean(h0, p1), signed_flom_mean(h0, p2)},
                       {flom_mean(h1, p1), signed_flom_mean(h1, p2)},
                       cov_of(h0),
                       cov_of(h1),
                       {},
                       {},
                       independence_mode,
                       p1,
                       p2,
                       l,
                       prior_h1};
    if (!s.m_h0.positive_definite() || !s.m_h1.positive_definite())
        throw std::invalid_argument("summarize_mixed: covariance not positive definite");
    if (independence_mode) {
        s.c_h0 = {s.m_h0.a11, 0.0, s.m_h0.a22};
        s.c_h1 = {s.m_h1.a11, 0.0, s.m_h1.a22};
    } else {
        s.c_h0 = s.m_h0;
        s.c_h1 = s.m_h1;
        double cond = std::max(s.c_h0.condition(), s.c_h1.condition());
        if (cond > condition_limit)
            throw IllConditionedError("summarize_mixed: covariance condition " +
                                          std::to_string(cond) +
                                          " exceeds limit; consider independence mode",
                                      cond);
    }
    return s;
}

inline BivariateSummary summarize_mixed(const HypothesisModel& model, double p1, double p2,
                                        std::size_t l, bool independence_mode = false,
                                        double condition_limit = 1e12) {
    return summarize_mixed(model.h0_params(), model.h1_params(), p1, p2, l, independence_mode,
                           condition_limit, model.prior_h1);
}

namespace detail {

struct Quad2D {
    Mat2 a;       // A = C_H0^-1 - C_H1^-1
    double b[2];  // b = C_H1^-1 mu_H1 - C_H0^-1 mu_H0
    double c;     // scalar block including the log-det and prior terms
};

inline Quad2D lrt_coeffs_2d(const BivariateSummary& s) {
    Mat2 i0 = s.c_h0.inverse();
    Mat2 i1 = s.c_h1.inverse();
    auto mat_vec = [](const Mat2& m, const double v[2], double out[2]) {
        out[0] = m.a11 * v[0] + m.a12 * v[1];
        out[1] = m.a12 * v[0] + m.a22 * v[1];
    };
    Quad2D q;
    q.a = {i0.a11 - i1.a11, i0.a12 - i1.a12, i0.a22 - i1.a22};
    double i0m0[2], i1m1[2];
    mat_vec(i0, s.mu_h0, i0m0);
    mat_vec(i1, s.mu_h1, i1m1);
    q.b[0] = i1m1[0] - i0m0[0];
    q.b[1] = i1m1[1] - i0m0[1];
    q.c = s.mu_h0[0] * i0m0[0] + s.mu_h0[1] * i0m0[1] -
          (s.mu_h1[0] * i1m1[0] + s.mu_h1[1] * i1m1[1]) +
          std::log(s.c_h0.det() / s.c_h1.det()) +
          2.0 * std::log(s.prior_h1 / (1.0 - s.prior_h1));
    return q;
}

inline double lrt_value_2d(const Quad2D& q, double z1, double z2) {
    double quad = q.a.a11 * z1 * z1 + 2.0 * q.a.a12 * z1 * z2 + q.a.a22 * z2 * z2;
    return 0.5 * quad + q.b[0] * z1 + q.b[1] * z2 + 0.5 * q.c;
}

} // namespace detail

/// H1 region of the 2-d LRT along the z2 line at fixed z1.
struct Z2Region {
    enum class Kind { inside, outside, all, none };
    Kind kind;
    double r1 = 0.0, r2 = 0.0; // interval endpoints when kind is inside/outside

    double h1_probability(double mean, double sd) const {
        switch (kind) {
        case Kind::all: return 1.0;
        case Kind::none: return 0.0;
        case Kind::inside: return detail::gauss_interval_prob(r1, r2, mean, sd);
        case Kind::outside:
        default: return 1.0 - detail::gauss_interval_prob(r1, r2, mean, sd);
        }
    }
};

namespace detail {

inline Z2Region h1_region_at(const Quad2D& q, double z1) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    double a_t = q.a.a22;
    double b_t = q.a.a12 * z1 + q.b[1];
    double c_t = q.a.a11 * z1 * z1 + 2.0 * q.b[0] * z1 + q.c;
    if (a_t == 0.0) {
        if (b_t == 0.0)
            return {c_t > 0.0 ? Z2Region::Kind::all : Z2Region::Kind::none};
        double t = -c_t / (2.0 * b_t);
        return b_t > 0.0 ? Z2Region{Z2Region::Kind::inside, t, inf}
                         : Z2Region{Z2Region::Kind::inside, -inf, t};
    }
    double disc = b_t * b_t - a_t * c_t;
    if (disc < 0.0) {
        // parabola in z2 does not change sign on the line
        return {a_t > 0.0 ? Z2Region::Kind::all : Z2Region::Kind::none};
    }
    auto [r1, r2] = quad_roots(a_t, b_t, c_t, disc);
    return {a_t > 0.0 ? Z2Region::Kind::outside : Z2Region::Kind::inside, r1, r2};
}

} // namespace detail

/// z2 thresholds of the mixed detector at fixed z1. `ok` carries the two
/// real roots; `out_of_range` means the z2 quadratic has no real roots there
/// (z1 outside [s1, s2], the whole line maps to one verdict); `degenerate`
/// covers a vanishing quadratic coefficient, where the linear fallback puts
/// one endpoint at infinity.
struct Thresholds2D {
    enum class Status { ok, out_of_range, degenerate };
    Status status;
    double t1 = 0.0, t2 = 0.0;
    Z2Region region{};
};

inline Thresholds2D thresholds_2d(const BivariateSummary& s, double z1) {
    detail::Quad2D q = detail::lrt_coeffs_2d(s);
    Z2Region reg = detail::h1_region_at(q, z1);
    if (q.a.a22 == 0.0) {
        Thresholds2D out{Thresholds2D::Status::degenerate, 0.0, 0.0, reg};
        if (reg.kind == Z2Region::Kind::inside) {
            out.t1 = reg.r1;
            out.t2 = reg.r2;
        }
        return out;
    }
    if (reg.kind == Z2Region::Kind::all || reg.kind == Z2Region::Kind::none)
        return {Thresholds2D::Status::out_of_range, 0.0, 0.0, reg};
    return {Thresholds2D::Status::ok, reg.r1, reg.r2, reg};
}

/// Roots s1 <= s2 of the discriminant quadratic in z1: the boundaries where
/// the z2 thresholds appear or vanish. Returns false when the discriminant
/// never crosses zero (no switching boundaries exist).
inline bool mixed_z1_range(const BivariateSummary& s, double& s1, double& s2) {
    detail::Quad2D q = detail::lrt_coeffs_2d(s);
    double a_s = q.a.a12 * q.a.a12 - q.a.a11 * q.a.a22;
    double b_s = q.a.a12 * q.b[1] - q.a.a22 * q.b[0];
    double c_s = q.b[1] * q.b[1] - q.c * q.a.a22;
    if (a_s == 0.0) return false;
    double disc = b_s * b_s - a_s * c_s;
    if (disc <= 0.0) return false;
    auto [r1, r2] = detail::quad_roots(a_s, b_s, c_s, disc);
    s1 = r1;
    s2 = r2;
    return true;
}

inline Decision lrt_2d(const std::vector<double>& obs, const BivariateSummary& s) {
    check_observation(obs);
    if (obs.size() != s.l)
        throw std::invalid_argument("lrt_2d: observation length does not match summary");
    CompensatedSum z1, z2;
    for (double y : obs) {
        double ap1 = std::pow(std::abs(y), s.p1);
        double ap2 = std::pow(std::abs(y), s.p2);
        z1.add(ap1);
        z2.add(y < 0.0 ? -ap2 : ap2);
    }
    double n = static_cast<double>(obs.size());
    detail::Quad2D q = detail::lrt_coeffs_2d(s);
    double t = detail::lrt_value_2d(q, z1.value() / n, z2.value() / n);
    return {t > 0.0, t};
}

/// Log-likelihood-ratio value of the mixed detector at a statistic pair.
inline double mixed_lrt_value(const BivariateSummary& s, double z1, double z2) {
    return detail::lrt_value_2d(detail::lrt_coeffs_2d(s), z1, z2);
}

enum class PeMixedMode {
    conditional, // exact error of the region under the bivariate Gaussian
    printed,     // marginal-independence approximation over [s1, s2] only
};

/// Error probability of the mixed detector. The conditional mode integrates
/// the exact conditional-Gaussian probability of the decision region and is
/// the default; the printed mode reproduces the marginal approximation that
/// ignores z1 outside [s1, s2] and treats the pair as independent.
inline double theoretical_pe_mixed(const BivariateSummary& s, double quad_tol = 1e-6,
                                   PeMixedMode mode = PeMixedMode::conditional) {
    if (!(quad_tol > 0.0))
        throw std::invalid_argument("theoretical_pe_mixed: quad_tol must be > 0");
    detail::Quad2D q = detail::lrt_coeffs_2d(s);
    double coeff_mag = std::abs(q.a.a11) + std::abs(q.a.a12) + std::abs(q.a.a22) +
                       std::abs(q.b[0]) + std::abs(q.b[1]) + std::abs(q.c);
    if (coeff_mag == 0.0) return s.prior_h1; // identical hypotheses: always H0

    using boost::math::quadrature::gauss_kronrod;
    auto integrate = [&](double lo, double hi, const std::vector<double>& cuts,
                         auto&& f) {
        std::vector<double> pts{lo, hi};
        for (double c : cuts)
            if (c > lo && c < hi) pts.push_back(c);
        std::sort(pts.begin(), pts.end());
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            total += gauss_kronrod<double, 15>::integrate(f, pts[i], pts[i + 1], 10,
                                                          quad_tol / pts.size());
        return total;
    };

    double s1 = 0.0, s2 = 0.0;
    bool has_range = mixed_z1_range(s, s1, s2);

    if (mode == PeMixedMode::printed) {
        if (!has_range) return s.prior_h1; // no crossing band: the printed
                                           // integrals are empty, decide H0
        auto printed_term = [&](const double mu[2], const Mat2& cov, bool err_is_h1) {
            double sd1 = std::sqrt(cov.a11), sd2 = std::sqrt(cov.a22);
            auto f = [&](double z1) {
                Z2Region reg = detail::h1_region_at(q, z1);
                double p_h1 = reg.h1_probability(mu[1], sd2);
                double density =
                    std::exp(-0.5 * (z1 - mu[0]) * (z1 - mu[0]) / cov.a11) /
                    (sd1 * std::sqrt(2.0 * pi));
                return density * (err_is_h1 ? p_h1 : 1.0 - p_h1);
            };
            return integrate(s1, s2, {}, f);
        };
        double pe = (1.0 - s.prior_h1) * printed_term(s.mu_h0, s.c_h0, true) +
                    s.prior_h1 * printed_term(s.mu_h1, s.c_h1, false);
        return std::clamp(pe, 0.0, 1.0);
    }

    // conditional mode: measure under the true covariance matrices
    std::vector<double> cuts;
    if (has_range) {
        cuts.push_back(s1);
        cuts.push_back(s2);
    }
    if (q.a.a22 == 0.0 && q.a.a12 != 0.0) cuts.push_back(-q.b[1] / q.a.a12);
    auto cond_term = [&](const double mu[2], const Mat2& cov, bool err_is_h1) {
        double sd1 = std::sqrt(cov.a11);
        double slope = cov.a12 / cov.a11;
        double cond_var = cov.a22 - cov.a12 * cov.a12 / cov.a11;
        double cond_sd = std::sqrt(std::max(cond_var, 0.0));
        auto f = [&](double z1) {
            Z2Region reg = detail::h1_region_at(q, z1);
            double cmean = mu[1] + slope * (z1 - mu[0]);
            double p_h1 = reg.h1_probability(cmean, cond_sd);
            double density = std::exp(-0.5 * (z1 - mu[0]) * (z1 - mu[0]) / cov.a11) /
                             (sd1 * std::sqrt(2.0 * pi));
            return density * (err_is_h1 ? p_h1 : 1.0 - p_h1);
        };
        return integrate(mu[0] - 12.0 * sd1, mu[0] + 12.0 * sd1, cuts, f);
    };
    double pe = (1.0 - s.prior_h1) * cond_term(s.mu_h0, s.m_h0, true) +
                s.prior_h1 * cond_term(s.mu_h1, s.m_h1, false);
    return std::clamp(pe, 0.0, 1.0);
}

/// Exact-likelihood detector backed by tabulated stable densities for the
/// two hypothesis laws. Table construction happens once per detector.
class MlDetector {
public:
    explicit MlDetector(const HypothesisModel& model, double pdf_tol = 1e-6)
        : h0_(model.h0_params(), pdf_tol), h1_(model.h1_params(), pdf_tol),
          prior_offset_(std::log(model.prior_h1 / (1.0 - model.prior_h1))) {}

    MlDetector(const HypothesisModel& model, std::shared_ptr<DensityTable> h0_table,
               std::shared_ptr<DensityTable> h1_table)
        : h0_(model.h0_params(), std::move(h0_table)),
          h1_(model.h1_params(), std::move(h1_table)),
          prior_offset_(std::log(model.prior_h1 / (1.0 - model.prior_h1))) {}

    /// Unstructured law pair, e.g. one coming out of parameter estimation.
    MlDetector(const StableParams& h0, const StableParams& h1, double prior_h1 = 0.5,
               double pdf_tol = 1e-6)
        : h0_(h0, pdf_tol), h1_(h1, pdf_tol),
          prior_offset_(std::log(prior_h1 / (1.0 - prior_h1))) {
        if (!(prior_h1 > 0.0 && prior_h1 < 1.0))
            throw std::invalid_argument("MlDetector: prior must lie in (0, 1)");
    }

    /// Prebuilt densities (lets callers share tables across detectors).
    MlDetector(Density h0, Density h1, double prior_h1 = 0.5)
        : h0_(std::move(h0)), h1_(std::move(h1)),
          prior_offset_(std::log(prior_h1 / (1.0 - prior_h1))) {
        if (!(prior_h1 > 0.0 && prior_h1 < 1.0))
            throw std::invalid_argument("MlDetector: prior must lie in (0, 1)");
    }

    Decision operator()(const std::vector<double>& obs) const {
        check_observation(obs);
        CompensatedSum acc;
        for (double y : obs) acc.add(h1_.log_pdf(y) - h0_.log_pdf(y));
        double t = acc.value() + prior_offset_;
        return {t > 0.0, t};
    }

    const Density& h0_density() const { return h0_; }
    const Density& h1_density() const { return h1_; }

private:
    Density h0_, h1_;
    double prior_offset_;
};

inline Decision ml_detect(const std::vector<double>& obs, const HypothesisModel& model,
                          double pdf_tol = 1e-6) {
    return MlDetector(model, pdf_tol)(obs);
}

/// Exponent choice per statistic family: FLOM pins the small-p floor (its
/// error probability only grows with p), SIGNED line-searches its unimodal
/// error curve, and the mixed pair grid-searches the feasible triangle.
/// Exponent bounds come from the smaller alpha when the laws disagree.
inline double optimize_p(StatKind::Family family, const StableParams& h0,
                         const StableParams& h1, std::size_t l, double prior_h1 = 0.5) {
    double alpha_min = std::min(h0.alpha, h1.alpha);
    switch (family) {
    case StatKind::Family::flom:
        return 0.001;
    case StatKind::Family::signed_flom: {
        double eps = 1e-3 * alpha_min;
        double lo = eps, hi = alpha_min / 2.0 - eps;
        double best_p = lo, best_pe = std::numeric_limits<double>::infinity();
        const int n = 200;
        for (int i = 0; i < n; ++i) {
            double p = lo + (hi - lo) * i / (n - 1.0);
            double pe =
                theoretical_pe_1d(summarize(StatKind::signed_flom(p), h0, h1, l, prior_h1));
            if (pe < best_pe) {
                best_pe = pe;
                best_p = p;
            }
        }
        return best_p;
    }
    case StatKind::Family::log_abs:
    default:
        throw std::invalid_argument("optimize_p: the log statistic has no exponent");
    }
}

inline double optimize_p(StatKind::Family family, const HypothesisModel& model,
                         std::size_t l) {
    return optimize_p(family, model.h0_params(), model.h1_params(), l, model.prior_h1);
}

inline std::pair<double, double> optimize_p_mixed(const StableParams& h0,
                                                  const StableParams& h1, std::size_t l,
                                                  bool independence_mode = false,
                                                  double quad_tol = 1e-5, int grid_n = 50,
                                                  double prior_h1 = 0.5) {
    double alpha_min = std::min(h0.alpha, h1.alpha);
    double eps = 1e-3 * alpha_min;
    double cap = alpha_min / 2.0 - eps;
    const int n = grid_n;
    double best_pe = std::numeric_limits<double>::infinity();
    std::pair<double, double> best{eps, eps};
    for (int i = 0; i < n; ++i) {
        double p1 = eps + (cap - 2.0 * eps) * i / (n - 1.0);
        for (int j = 0; j < n; ++j) {
            double p2 = eps + (cap - 2.0 * eps) * j / (n - 1.0);
            if (!(p1 + p2 < cap)) continue;
            double pe;
            try {
                pe = theoretical_pe_mixed(
                    summarize_mixed(h0, h1, p1, p2, l, independence_mode, 1e12, prior_h1),
                    quad_tol);
            } catch (const IllConditionedError&) {
                continue;
            }
            if (pe < best_pe) {
                best_pe = pe;
                best = {p1, p2};
            }
        }
    }
    if (!std::isfinite(best_pe))
        throw std::runtime_error("optimize_p_mixed: no feasible exponent pair");
    return best;
}

inline std::pair<double, double> optimize_p_mixed(const HypothesisModel& model,
                                                  std::size_t l,
                                                  bool independence_mode = false,
                                                  double quad_tol = 1e-5) {
    return optimize_p_mixed(model.h0_params(), model.h1_params(), l, independence_mode,
                            quad_tol, 50, model.prior_h1);
}

} // namespace stabledet
