#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "math.hpp"
#include "rng.hpp"
#include "stable.hpp"

namespace stabledet {

// Physical layer: two coexisting Poisson fields of transmitters on the plane,
// power-law path loss r^-delta, observed at a fusion center in the origin.
// The aggregate converges to an alpha-stable law with alpha = 2/delta; the
// mapping below turns network parameters into the stable hypothesis pair and
// the simulator draws finite-region aggregates to validate that convergence.

enum class FadingKind { rayleigh_amplitude, constant_unit };

/// Amplitude fading coefficient h >= 0, normalized so E[h^2] = 1.
struct FadingSpec {
    FadingKind kind = FadingKind::rayleigh_amplitude;

    /// E[h^q] for q > 0.
    double moment_abs(double q) const {
        if (!(q > 0.0) || !std::isfinite(q))
            throw std::invalid_argument("FadingSpec: moment order must be finite and > 0");
        switch (kind) {
        case FadingKind::rayleigh_amplitude:
            // Rayleigh with scale 1/sqrt(2): E[h^q] = Gamma(1 + q/2)
            return std::tgamma(1.0 + 0.5 * q);
        case FadingKind::constant_unit:
            return 1.0;
        }
        throw std::logic_error("FadingSpec: unknown kind");
    }

    template <class Engine>
    double sample(Engine& eng) const {
        switch (kind) {
        case FadingKind::rayleigh_amplitude:
            return std::sqrt(exponential(eng));
        case FadingKind::constant_unit:
            return 1.0;
        }
        throw std::logic_error("FadingSpec: unknown kind");
    }
};

/// Interferer emission w: symmetric two-point +-amplitude.
struct EmissionSpec {
    double amplitude = 1.0;

    /// E[|w|^q] for q > 0.
    double moment_abs(double q) const {
        check();
        if (!(q > 0.0) || !std::isfinite(q))
            throw std::invalid_argument("EmissionSpec: moment order must be finite and > 0");
        return std::pow(amplitude, q);
    }

    template <class Engine>
    double sample(Engine& eng) const {
        check();
        return canon_open(eng) < 0.5 ? -amplitude : amplitude;
    }

    void check() const {
        if (!(amplitude > 0.0) || !std::isfinite(amplitude))
            throw std::invalid_argument("EmissionSpec: amplitude must be finite and > 0");
    }
};

/// Densities, path loss and per-node behaviour of the two networks.
struct NetworkConfig {
    double lambda_d = 1.0;      // desired-network density, nodes per unit area
    double lambda_i = 1.0;      // interferer density, nodes per unit area
    double delta = 4.0;         // path-loss exponent, > 1
    FadingSpec fading{};        // family of h (and of g, drawn independently)
    double p_local_error = 0.0; // local detection error probability in [0,1)
    double m_amplitude = 1.0;   // local decision amplitude M
    EmissionSpec w_emission{};  // interferer emission w

    double alpha() const { return 2.0 / delta; }

    void check() const {
        if (!(lambda_d > 0.0) || !std::isfinite(lambda_d))
            throw std::invalid_argument("NetworkConfig: lambda_d must be finite and > 0");
        if (!(lambda_i > 0.0) || !std::isfinite(lambda_i))
            throw std::invalid_argument("NetworkConfig: lambda_i must be finite and > 0");
        if (!(delta > 1.0) || !std::isfinite(delta))
            throw std::invalid_argument("NetworkConfig: delta must be finite and > 1");
        if (!(p_local_error >= 0.0) || !(p_local_error < 1.0))
            throw std::invalid_argument("NetworkConfig: p_local_error must be in [0,1)");
        if (!(m_amplitude > 0.0) || !std::isfinite(m_amplitude))
            throw std::invalid_argument("NetworkConfig: m_amplitude must be finite and > 0");
        w_emission.check();
    }
};

/// The detection problem the fusion center faces: H0 symmetric stable
/// interference only, H1 the same plus a positively skewed stable signal.
struct HypothesisModel {
    double alpha;
    double sigma_h1;
    double beta_h1;
    double sigma_h0;
    double prior_h1;

    HypothesisModel(double alpha_, double sigma_h1_, double beta_h1_, double sigma_h0_,
                    double prior_h1_ = 0.5)
        : alpha(alpha_), sigma_h1(sigma_h1_), beta_h1(beta_h1_), sigma_h0(sigma_h0_),
          prior_h1(prior_h1_) {
        if (!(alpha > 0.0) || !(alpha < 2.0))
            throw std::invalid_argument("HypothesisModel: alpha must be in (0,2)");
        if (alpha == 1.0)
            throw std::invalid_argument("HypothesisModel: alpha = 1 is not supported");
        if (!(sigma_h0 > 0.0) || !(sigma_h1 > sigma_h0) || !std::isfinite(sigma_h1))
            throw std::invalid_argument("HypothesisModel: need sigma_h1 > sigma_h0 > 0");
        if (!(beta_h1 > 0.0) || !(beta_h1 < 1.0))
            throw std::invalid_argument("HypothesisModel: beta_h1 must be in (0,1)");
        if (!(prior_h1 > 0.0) || !(prior_h1 < 1.0))
            throw std::invalid_argument("HypothesisModel: prior_h1 must be in (0,1)");
    }

    StableParams h0_params() const { return {alpha, sigma_h0, 0.0, 0.0}; }
    StableParams h1_params() const { return {alpha, sigma_h1, beta_h1, 0.0}; }
};

/// Stable law of the aggregate desired signal: totally skewed to the right.
inline StableParams signal_params(const NetworkConfig& cfg) {
    cfg.check();
    double alpha = cfg.alpha();
    double scale_pow = cfg.lambda_d * (pi / 2.0) / c_alpha(alpha) *
                       std::pow(cfg.m_amplitude, alpha) * cfg.fading.moment_abs(2.0 * alpha);
    return {alpha, std::pow(scale_pow, 1.0 / alpha), 1.0, 0.0};
}

/// Stable law of the aggregate interference: symmetric.
inline StableParams interference_params(const NetworkConfig& cfg) {
    cfg.check();
    double alpha = cfg.alpha();
    double mark_moment = cfg.fading.moment_abs(alpha) * cfg.fading.moment_abs(alpha) *
                         cfg.w_emission.moment_abs(alpha);
    double scale_pow = cfg.lambda_i * (pi / 2.0) / c_alpha(alpha) * mark_moment;
    return {alpha, std::pow(scale_pow, 1.0 / alpha), 0.0, 0.0};
}

enum class LocalErrorConvention {
    as_written, // transmitting density lambda_d * p_local_error
    complement, // transmitting density lambda_d * (1 - p_local_error)
};

/// Thin the desired network by the local detection outcome. The as_written
/// convention multiplies by the error probability itself; complement uses
/// the success probability instead.
inline NetworkConfig apply_local_error(const NetworkConfig& cfg,
                                       LocalErrorConvention conv = LocalErrorConvention::as_written) {
    cfg.check();
    double p = cfg.p_local_error;
    if (conv == LocalErrorConvention::complement) p = 1.0 - p;
    if (!(p > 0.0))
        throw std::invalid_argument("apply_local_error: transmitting set would be empty");
    NetworkConfig thinned = cfg;
    thinned.lambda_d = cfg.lambda_d * p;
    return thinned;
}

/// Hypothesis pair seen by the fusion center; H1 is the stable sum of signal
/// and interference, so its (sigma, beta) come straight from combine().
inline HypothesisModel hypothesis_model(const NetworkConfig& cfg, double prior_h1 = 0.5) {
    StableParams sig = signal_params(cfg);
    StableParams intf = interference_params(cfg);
    StableParams h1 = combine({sig, intf});
    return {h1.alpha, h1.sigma, h1.beta, intf.sigma, prior_h1};
}

/// Modified SNR in dB: the signal-to-interference ratio of the alpha-th
/// powers of scale, 10 log10(sigma_s^alpha / sigma_w^alpha).
inline double snr_m(const HypothesisModel& model) {
    double s1 = std::pow(model.sigma_h1, model.alpha);
    double s0 = std::pow(model.sigma_h0, model.alpha);
    return 10.0 * std::log10((s1 - s0) / s0);
}

/// Hypothesis model at a prescribed modified SNR with unit interference
/// scale. Inverse of snr_m with sigma_h0 = 1.
inline HypothesisModel model_for_snr(double alpha, double snr_db, double prior_h1 = 0.5) {
    double ratio = std::pow(10.0, snr_db / 10.0); // sigma_s^alpha / sigma_w^alpha
    double sum = 1.0 + ratio;
    return {alpha, std::pow(sum, 1.0 / alpha), ratio / sum, 1.0, prior_h1};
}

enum class AggregateKind { signal, interference };
enum class TailMode { none, gaussian };

class RegionTooSmallError : public std::runtime_error {
public:
    explicit RegionTooSmallError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

struct MarkMoments {
    double mean;    // E[X]
    double second;  // E[X^2]
    double abs3;    // E[|X|^3]
};

inline MarkMoments mark_moments(const NetworkConfig& cfg, AggregateKind which) {
    if (which == AggregateKind::signal) {
        double m = cfg.m_amplitude;
        return {m * cfg.fading.moment_abs(2.0), m * m * cfg.fading.moment_abs(4.0),
                m * m * m * cfg.fading.moment_abs(6.0)};
    }
    double h2 = cfg.fading.moment_abs(2.0);
    double h3 = cfg.fading.moment_abs(3.0);
    double w2 = cfg.w_emission.moment_abs(2.0);
    double w3 = cfg.w_emission.moment_abs(3.0);
    return {0.0, h2 * h2 * w2, h3 * h3 * w3}; // E[w] = 0 by symmetry
}

} // namespace detail

/// Draws aggregates sum_i X_i / r_i^delta from one truncated Poisson field.
/// Nodes beyond the region radius are replaced by a Gaussian with the exact
/// far-field mean and variance (TailMode::gaussian) or dropped entirely
/// (TailMode::none). Construction bounds the characteristic-function error of
/// that replacement on |t| <= 5 and rejects regions where it exceeds
/// cf_bias_tol.
class AggregateSimulator {
public:
    static constexpr double t_check = 5.0;

    AggregateSimulator(const NetworkConfig& cfg, AggregateKind which, double region_radius,
                       TailMode tail = TailMode::gaussian, double cf_bias_tol = 1e-3)
        : cfg_(cfg), which_(which), radius_(region_radius), tail_(tail) {
        cfg_.check();
        if (!(region_radius > 0.0) || !std::isfinite(region_radius))
            throw std::invalid_argument("AggregateSimulator: region radius must be finite and > 0");
        if (!(cf_bias_tol > 0.0))
            throw std::invalid_argument("AggregateSimulator: cf_bias_tol must be > 0");
        if (which == AggregateKind::signal && !(cfg.delta > 2.0))
            throw std::invalid_argument(
                "AggregateSimulator: signal aggregate needs delta > 2 (far-field mean diverges)");
        lambda_ = which == AggregateKind::signal ? cfg.lambda_d : cfg.lambda_i;
        expected_count_ = lambda_ * pi * radius_ * radius_;
        auto mm = detail::mark_moments(cfg_, which_);
        double d = cfg_.delta;
        tail_mean_ = mm.mean == 0.0
                         ? 0.0
                         : 2.0 * pi * lambda_ * mm.mean * std::pow(radius_, 2.0 - d) / (d - 2.0);
        tail_var_ = 2.0 * pi * lambda_ * mm.second * std::pow(radius_, 2.0 - 2.0 * d) /
                    (2.0 * d - 2.0);
        tail_abs3_ = 2.0 * pi * lambda_ * mm.abs3 * std::pow(radius_, 2.0 - 3.0 * d) /
                     (3.0 * d - 2.0);
        if (cf_bias_bound(t_check) > cf_bias_tol)
            throw RegionTooSmallError(
                "AggregateSimulator: far-field bias bound " +
                std::to_string(cf_bias_bound(t_check)) + " at t = " + std::to_string(t_check) +
                " exceeds " + std::to_string(cf_bias_tol) + "; enlarge the region");
    }

    template <class Engine>
    double operator()(Engine& eng) const {
        std::uint64_t n = poisson_count(eng, expected_count_);
        CompensatedSum acc;
        for (std::uint64_t i = 0; i < n; ++i) {
            double r = radius_ * std::sqrt(canon_open(eng));
            double x;
            if (which_ == AggregateKind::signal) {
                double h = cfg_.fading.sample(eng);
                x = h * h * cfg_.m_amplitude;
            } else {
                x = cfg_.fading.sample(eng) * cfg_.fading.sample(eng) *
                    cfg_.w_emission.sample(eng);
            }
            acc.add(x * std::pow(r, -cfg_.delta));
        }
        if (tail_ == TailMode::gaussian)
            acc.add(tail_mean_ + std::sqrt(tail_var_) * standard_normal(eng));
        return acc.value();
    }

    /// Bound on |E e^{itY_exact} - E e^{itY_simulated}| from the far field.
    double cf_bias_bound(double t) const {
        double at = std::abs(t);
        double third = at * at * at / 6.0 * tail_abs3_;
        if (tail_ == TailMode::gaussian) return third;
        return third + at * std::abs(tail_mean_) + 0.5 * at * at * tail_var_;
    }

    double region_radius() const { return radius_; }
    double expected_count() const { return expected_count_; }
    double tail_mean() const { return tail_mean_; }
    double tail_sd() const { return std::sqrt(tail_var_); }

private:
    NetworkConfig cfg_;
    AggregateKind which_;
    double radius_;
    TailMode tail_;
    double lambda_ = 0.0;
    double expected_count_ = 0.0;
    double tail_mean_ = 0.0;
    double tail_var_ = 0.0;
    double tail_abs3_ = 0.0;
};

/// Smallest region radius whose far-field bias bound meets cf_bias_tol.
inline double choose_radius(const NetworkConfig& cfg, AggregateKind which,
                            TailMode tail = TailMode::gaussian, double cf_bias_tol = 1e-3) {
    cfg.check();
    auto bias_at = [&](double r) {
        AggregateSimulator sim(cfg, which, r, tail,
                               std::numeric_limits<double>::infinity());
        return sim.cf_bias_bound(AggregateSimulator::t_check);
    };
    double lo = 1e-3, hi = 1.0;
    while (bias_at(hi) > cf_bias_tol) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e9)
            throw std::invalid_argument("choose_radius: no feasible radius below 1e9");
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (bias_at(mid) > cf_bias_tol ? lo : hi) = mid;
    }
    return hi;
}

/// Empirical characteristic function (1/N) sum exp(j t y_i).
inline std::complex<double> empirical_cf(const std::vector<double>& samples, double t) {
    if (samples.empty())
        throw std::invalid_argument("empirical_cf: samples must be non-empty");
    CompensatedSum re, im;
    for (double y : samples) {
        re.add(std::cos(t * y));
        im.add(std::sin(t * y));
    }
    double n = static_cast<double>(samples.size());
    return {re.value() / n, im.value() / n};
}

} // namespace stabledet
