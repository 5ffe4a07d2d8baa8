#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "math.hpp"
#include "stable.hpp"

namespace stabledet {

/// Raised when the adaptive inversion quadrature cannot reach the requested
/// tolerance within its panel budget.
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// f(y) = (1/pi) Int_0^inf exp(-(sigma t)^alpha) cos(t (mu - y) + beta w s(t)) dt.
// The integrand is evaluated in real arithmetic; w is the CF's skew kernel.
struct InversionIntegrand {
    double alpha, sigma, beta, shift; // shift = mu - y

    double operator()(double t) const {
        double s = std::pow(sigma * t, alpha);
        double phase;
        if (alpha == 1.0)
            phase = shift * t - s * beta * (2.0 / pi) * std::log(t);
        else
            phase = shift * t + s * beta * std::tan(pi * alpha / 2.0);
        return std::exp(-s) * std::cos(phase);
    }
};

/// Smallest T with Int_T^inf exp(-(sigma t)^alpha) dt <= tol_tail, from the
/// incomplete-gamma bound Gamma(s,x) <= 2 x^{s-1} e^{-x} (x >= max(1, 2(s-1))).
inline double envelope_cutoff(double alpha, double sigma, double tol_tail) {
    double s = 1.0 / alpha;
    double x = std::max(1.0, 2.0 * (s - 1.0) + 1.0);
    auto bound = [&](double xx) {
        return 2.0 * std::pow(xx, s - 1.0) * std::exp(-xx) / (alpha * sigma);
    };
    while (bound(x) > tol_tail) x *= 1.25;
    return std::pow(x, 1.0 / alpha) / sigma;
}

struct Panel {
    double a, b, val, err;
};

inline Panel make_panel(const InversionIntegrand& f, double a, double b) {
    double err = 0.0;
    double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 0, 0.0, &err);
    return {a, b, val, err};
}

/// Density of S(alpha, sigma, beta, mu) at y by adaptive panel quadrature of
/// the inversion integral, to absolute accuracy tol. Panels are sized so each
/// holds at most ~pi of oscillation phase; the worst-error panel is bisected
/// until the summed error estimate fits the budget.
inline double inversion_pdf(const StableParams& p, double y, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("pdf: tol must be positive");

    InversionIntegrand f{p.alpha, p.sigma, p.beta, p.mu - y};
    double tol_tail = 0.1 * tol;
    double tail_T = envelope_cutoff(p.alpha, p.sigma, tol_tail);
    double zfreq = std::abs(f.shift);

    constexpr std::size_t max_initial = 200000;
    constexpr std::size_t max_refine = 100000;

    // width limits: linear phase (half cycle), skew-kernel phase, log kernel at alpha=1
    double abs_bw = std::abs(p.beta) * ((p.alpha == 1.0)
                        ? 1.0
                        : std::abs(std::tan(pi * p.alpha / 2.0)));
    double w_skew_const = std::numeric_limits<double>::infinity();
    if (p.alpha < 1.0 && abs_bw > 0.0)
        w_skew_const = std::pow(pi / (abs_bw * std::pow(p.sigma, p.alpha)), 1.0 / p.alpha);

    auto width_at = [&](double t) {
        double w = pi / std::max(zfreq, 0.5);
        w = std::min(w, w_skew_const);
        if (p.alpha > 1.0 && abs_bw > 0.0) {
            double deriv = abs_bw * p.alpha * std::pow(p.sigma, p.alpha)
                           * std::pow(std::max(t, 1e-12), p.alpha - 1.0);
            w = std::min(w, pi / (deriv + 1e-12));
        }
        if (p.alpha == 1.0 && std::abs(p.beta) > 0.0) {
            double deriv = std::abs(p.beta) * p.sigma * (2.0 / pi)
                           * (std::abs(std::log(std::max(t, 1e-6))) + 2.0);
            w = std::min(w, pi / deriv);
        }
        return w;
    };

    std::vector<Panel> panels;
    panels.reserve(1024);

    // geometric pre-split near 0 tames the t^alpha kink of the envelope
    double w0 = std::min(width_at(0.0), tail_T);
    {
        double lo = w0 * 0x1p-26;
        panels.push_back(make_panel(f, 0.0, lo));
        while (lo < w0) {
            double hi = std::min(2.0 * lo, w0);
            panels.push_back(make_panel(f, lo, hi));
            lo = hi;
        }
    }
    double t = w0;
    while (t < tail_T) {
        double hi = std::min(t + width_at(t), tail_T);
        panels.push_back(make_panel(f, t, hi));
        t = hi;
        if (panels.size() > max_initial)
            throw IntegrationError("pdf: oscillation budget exhausted (initial split)");
    }

    auto worse = [](const Panel& x, const Panel& y) {
        return x.err < y.err || (x.err == y.err && x.a > y.a);
    };
    std::make_heap(panels.begin(), panels.end(), worse);

    auto total_error = [&panels] {
        CompensatedSum esum;
        for (const auto& pl : panels) esum.add(pl.err);
        return esum.value();
    };

    double err_budget = tol - tol_tail;
    double err_total = total_error();
    std::size_t refinements = 0;
    while (err_total > err_budget) {
        if (++refinements > max_refine)
            throw IntegrationError("pdf: refinement budget exhausted");
        std::pop_heap(panels.begin(), panels.end(), worse);
        Panel worst = panels.back();
        panels.pop_back();
        double mid = 0.5 * (worst.a + worst.b);
        Panel left = make_panel(f, worst.a, mid);
        Panel right = make_panel(f, mid, worst.b);
        err_total += left.err + right.err - worst.err;
        panels.push_back(left);
        std::push_heap(panels.begin(), panels.end(), worse);
        panels.push_back(right);
        std::push_heap(panels.begin(), panels.end(), worse);
        // kill accumulated drift in the running sum periodically
        if ((refinements & 0xfff) == 0) err_total = total_error();
    }

    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    CompensatedSum vsum;
    for (const auto& pl : panels) vsum.add(pl.val);
    return std::max(vsum.value() / pi, 0.0);
}

} // namespace detail

/// Density of the stable law at y, to absolute accuracy tol (default 1e-8).
inline double pdf(const StableParams& p, double y, double tol = 1e-8) {
    return detail::inversion_pdf(p, y, tol);
}

/// Power-series expansion of the standardized density (sigma = 1, mu = 0)
/// around z = +infinity:
///
///   f(z) = (1/pi) sum_{k>=1} (-1)^{k+1} Gamma(alpha k+1)/k! R^k
///                  sin(k (theta + pi alpha/2)) z^{-alpha k - 1},
///   R = sqrt(1 + beta^2 tan^2(pi alpha/2)),  theta = arctan(beta tan(pi alpha/2)).
///
/// Convergent for every z > 0 when alpha < 1; asymptotic when alpha > 1
/// (truncated at the smallest term). Negative arguments are handled by the
/// caller through beta -> -beta reflection. For beta = -1, alpha < 1 all
/// coefficients vanish: the law has no mass on that side.
class TailSeries {
public:
    TailSeries(double alpha, double beta) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha < 2.0))
            throw std::invalid_argument("TailSeries: alpha must lie in (0, 2)");
        if (alpha == 1.0 && beta != 0.0) return; // log kernel: no series; stays empty
        double logR = 0.0, theta = 0.0;
        if (beta != 0.0) {
            double eta = std::tan(pi * alpha / 2.0);
            logR = 0.5 * std::log1p(beta * beta * eta * eta);
            theta = std::atan(beta * eta);
        }
        coef_.reserve(200);
        for (int k = 1; k <= 200; ++k) {
            double lg = std::lgamma(alpha * k + 1.0) - std::lgamma(k + 1.0) + k * logR;
            if (lg > 690.0) break; // later terms exceed double range
            double sign = (k % 2 == 1) ? 1.0 : -1.0;
            coef_.push_back(sign * std::exp(lg) * std::sin(k * (theta + pi * alpha / 2.0)) / pi);
        }
    }

    struct Eval {
        double value;
        double error;
    };

    /// Series value at z > 0 with an error estimate (truncation + cancellation).
    Eval eval(double z, double tol) const { return sum_terms(z, tol, Mode::density); }

    /// Upper tail mass Int_z^inf f, integrating the series term by term.
    Eval tail_mass(double z, double tol) const { return sum_terms(z, tol, Mode::mass); }

    bool usable() const { return !coef_.empty(); }

private:
    enum class Mode { density, mass };

    // density: term_k = c_k z^{-alpha k - 1}; mass: term_k = c_k z^{-alpha k} / (alpha k)
    Eval sum_terms(double z, double tol, Mode mode) const {
        if (coef_.empty()) return {0.0, std::numeric_limits<double>::infinity()};
        double u = std::pow(z, -alpha_);
        double up = 1.0;
        CompensatedSum acc;
        double maxabs = 0.0;
        double last = 0.0;
        int small_streak = 0;
        bool asymptotic = alpha_ > 1.0;
        double prev_mag = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < coef_.size(); ++k) {
            up *= u;
            double term = coef_[k] * up;
            term = (mode == Mode::density) ? term / z : term / (alpha_ * (k + 1));
            double mag = std::abs(term);
            if (asymptotic && mag > prev_mag) {
                // smallest-term truncation of the divergent expansion
                return {acc.value(), mag + 1e-16 * maxabs};
            }
            prev_mag = mag;
            acc.add(term);
            maxabs = std::max(maxabs, mag);
            last = mag;
            if (mag < 0.05 * tol) {
                if (++small_streak >= 2)
                    return {acc.value(), 2.0 * mag + 1e-16 * maxabs};
            } else {
                small_streak = 0;
            }
        }
        return {acc.value(), 10.0 * last + 1e-16 * maxabs};
    }

    double alpha_;
    std::vector<double> coef_;
};

/// Grid cache of the standardized density f(z; alpha, beta), sigma folded out
/// by the caller. Linear interpolation inside [z_lo, z_hi]; the convergent
/// power series beyond the switch radii; direct quadrature as a last resort.
/// The documented interpolation error bound is h^2 max|f''| / 8 plus the
/// build-time quadrature tolerance.
class DensityTable {
public:
    DensityTable(double alpha, double beta, double tol = 1e-6)
        : alpha_(alpha), beta_(beta), tol_(tol),
          pos_(alpha, beta), neg_(alpha, -beta) {
        if (!(tol > 0.0)) throw std::invalid_argument("DensityTable: tol must be positive");
        quad_tol_ = std::min(0.2 * tol, 1e-7);

        zsw_pos_ = pick_switch_radius(pos_, +1);
        zsw_neg_ = pick_switch_radius(neg_, -1);

        double lo = -zsw_neg_, hi = zsw_pos_;
        if (alpha_ < 1.0 && beta_ == 1.0) lo = -0.05;  // one-sided support
        if (alpha_ < 1.0 && beta_ == -1.0) hi = 0.05;

        // coarse curvature pass fixes the grid pitch
        const int nc = 257;
        double hc = (hi - lo) / (nc - 1);
        std::vector<double> coarse(nc);
        StableParams std_params{alpha_, 1.0, beta_, 0.0};
        for (int i = 0; i < nc; ++i)
            coarse[i] = detail::inversion_pdf(std_params, lo + i * hc, quad_tol_);
        double m2 = 1e-3;
        for (int i = 1; i + 1 < nc; ++i) {
            double d2 = std::abs(coarse[i - 1] - 2.0 * coarse[i] + coarse[i + 1]) / (hc * hc);
            m2 = std::max(m2, d2);
        }

        double h = std::sqrt(8.0 * tol / m2);
        std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
        n = std::clamp<std::size_t>(n, 1025, 40001);
        z_lo_ = lo;
        h_ = (hi - lo) / static_cast<double>(n - 1);
        max_interp_error_ = h_ * h_ * m2 / 8.0 + quad_tol_;
        values_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            values_[i] = detail::inversion_pdf(std_params, z_lo_ + i * h_, quad_tol_);
    }

    /// Standardized density at any z.
    double operator()(double z) const {
        double z_hi = z_lo_ + h_ * static_cast<double>(values_.size() - 1);
        if (z >= z_lo_ && z <= z_hi) {
            double pos = (z - z_lo_) / h_;
            std::size_t i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
            double w = pos - static_cast<double>(i);
            return values_[i] + w * (values_[i + 1] - values_[i]);
        }
        if (z > 0.0 && series_pos_ok_) return std::max(pos_.eval(z, tol_).value, 0.0);
        if (z < 0.0 && series_neg_ok_) return std::max(neg_.eval(-z, tol_).value, 0.0);
        return detail::inversion_pdf({alpha_, 1.0, beta_, 0.0}, z, quad_tol_);
    }

    /// Upper tail mass P(Z > z) for z beyond the positive switch radius.
    double upper_tail_mass(double z) const {
        if (!(z >= zsw_pos_)) throw std::invalid_argument("upper_tail_mass: z below switch radius");
        if (!series_pos_ok_)
            throw IntegrationError("upper_tail_mass: no convergent series on this side");
        return std::max(pos_.tail_mass(z, tol_).value, 0.0);
    }
    double lower_tail_mass(double z) const {
        if (!(z <= -zsw_neg_)) throw std::invalid_argument("lower_tail_mass: z above switch radius");
        if (!series_neg_ok_)
            throw IntegrationError("lower_tail_mass: no convergent series on this side");
        return std::max(neg_.tail_mass(-z, tol_).value, 0.0);
    }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double tol() const { return tol_; }
    double max_interp_error() const { return max_interp_error_; }
    double z_switch_pos() const { return zsw_pos_; }
    double z_switch_neg() const { return zsw_neg_; }
    std::size_t size() const { return values_.size(); }

private:
    // smallest radius where the series and the quadrature agree to 5 tol,
    // with the series' own error estimate under control
    double pick_switch_radius(const TailSeries& side, int sgn) {
        static constexpr double candidates[] = {1.5, 2, 3, 4, 6, 9, 14, 20, 30};
        StableParams std_params{alpha_, 1.0, beta_, 0.0};
        for (double c : candidates) {
            bool ok = true;
            for (double factor : {1.0, 1.4, 2.2}) {
                double z = c * factor;
                auto se = side.eval(z, 0.25 * tol_);
                if (se.error > 0.5 * tol_) { ok = false; break; }
                double qv = detail::inversion_pdf(std_params, sgn * z, quad_tol_);
                if (std::abs(se.value - qv) > 5.0 * tol_) { ok = false; break; }
            }
            if (ok) {
                (sgn > 0 ? series_pos_ok_ : series_neg_ok_) = true;
                return c;
            }
        }
        (sgn > 0 ? series_pos_ok_ : series_neg_ok_) = false;
        return 30.0; // table spans this far; beyond, direct quadrature
    }

    double alpha_, beta_, tol_, quad_tol_;
    TailSeries pos_, neg_;
    bool series_pos_ok_ = false, series_neg_ok_ = false;
    double zsw_pos_ = 0.0, zsw_neg_ = 0.0;
    double z_lo_ = 0.0, h_ = 1.0, max_interp_error_ = 0.0;
    std::vector<double> values_;
};

/// Table-accelerated density of one stable law: folds sigma and mu into the
/// standardized table through the scaling identity (including the alpha = 1
/// log shift), with a hard floor of 1e-300 for log evaluations.
class Density {
public:
    explicit Density(const StableParams& p, double table_tol = 1e-6)
        : p_(p), table_(std::make_shared<DensityTable>(p.alpha, p.beta, table_tol)) {
        shift_ = p_.mu;
        if (p_.alpha == 1.0)
            shift_ += (2.0 / pi) * p_.beta * p_.sigma * std::log(p_.sigma);
    }

    Density(const StableParams& p, std::shared_ptr<DensityTable> shared)
        : p_(p), table_(std::move(shared)) {
        if (table_->alpha() != p.alpha || table_->beta() != p.beta)
            throw std::invalid_argument("Density: table/params mismatch");
        shift_ = p_.mu;
        if (p_.alpha == 1.0)
            shift_ += (2.0 / pi) * p_.beta * p_.sigma * std::log(p_.sigma);
    }

    double pdf(double y) const { return (*table_)((y - shift_) / p_.sigma) / p_.sigma; }

    double log_pdf(double y) const { return std::log(std::max(pdf(y), 1e-300)); }

    const StableParams& params() const { return p_; }
    const DensityTable& table() const { return *table_; }
    std::shared_ptr<DensityTable> table_ptr() const { return table_; }

private:
    StableParams p_;
    std::shared_ptr<DensityTable> table_;
    double shift_ = 0.0;
};

} // namespace stabledet
