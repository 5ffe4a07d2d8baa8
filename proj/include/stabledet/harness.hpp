#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "detectors.hpp"
#include "estimation.hpp"
#include "poisson_field.hpp"
#include "stable_pdf.hpp"

namespace stabledet {

// Monte Carlo experiment harness. Everything here is deterministic given the
// configured seed: each (L, snr) point owns a subtree of seeds, every trial
// draws from its own engine, and aggregation is a commutative count, so the
// emitted tables are identical no matter how trials are partitioned over
// threads.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DetectorId { ml, flom, signed_flom, log_abs, mixed, mixed_indep };

inline const char* detector_name(DetectorId id) {
    switch (id) {
    case DetectorId::ml: return "ML";
    case DetectorId::flom: return "FLOM";
    case DetectorId::signed_flom: return "SIGNED";
    case DetectorId::log_abs: return "LOG";
    case DetectorId::mixed: return "MIXED";
    case DetectorId::mixed_indep: return "MIXED-INDEP";
    }
    return "?";
}

inline DetectorId detector_from_name(const std::string& name) {
    for (DetectorId id : {DetectorId::ml, DetectorId::flom, DetectorId::signed_flom,
                          DetectorId::log_abs, DetectorId::mixed, DetectorId::mixed_indep})
        if (name == detector_name(id)) return id;
    throw ConfigError("unknown detector name: " + name);
}

inline std::vector<DetectorId> all_detectors() {
    return {DetectorId::ml,      DetectorId::flom,  DetectorId::signed_flom,
            DetectorId::log_abs, DetectorId::mixed, DetectorId::mixed_indep};
}

struct EstimationSettings {
    std::size_t n_e = 1000;             ///< calibration samples per hypothesis
    std::size_t refresh_period = 20000; ///< trials between refits
};

struct SweepConfig {
    double alpha = 0.5;
    std::vector<int> l_values{10};
    std::vector<double> snr_grid;
    std::vector<DetectorId> detectors = all_detectors();
    std::uint64_t n_trials = 100000;
    std::uint64_t seed = 1;
    std::optional<EstimationSettings> estimation;
    std::optional<double> local_error;  ///< per-sensor reporting error P; shifts SNR by 10 log10 P
    std::string output_path;            ///< advisory; the CLI may override
    double ml_pdf_tol = 1e-6;
    double quad_tol = 1e-6;
    int threads = 1;

    void check() const {
        if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0)
            throw ConfigError("config: alpha must lie in (0, 2) excluding 1");
        if (l_values.empty()) throw ConfigError("config: need at least one L");
        for (int l : l_values)
            if (l < 1) throw ConfigError("config: L values must be >= 1");
        if (snr_grid.empty()) throw ConfigError("config: snr_grid must not be empty");
        for (std::size_t i = 0; i < snr_grid.size(); ++i) {
            if (!std::isfinite(snr_grid[i])) throw ConfigError("config: snr values must be finite");
            if (i > 0 && !(snr_grid[i] > snr_grid[i - 1]))
                throw ConfigError("config: snr_grid must be strictly increasing");
        }
        if (detectors.empty()) throw ConfigError("config: need at least one detector");
        if (n_trials == 0) throw ConfigError("config: n_trials must be >= 1");
        if (estimation) {
            if (estimation->n_e < 50) throw ConfigError("config: estimation.n_e must be >= 50");
            if (estimation->refresh_period < 1)
                throw ConfigError("config: estimation.refresh_period must be >= 1");
        }
        if (local_error && !(*local_error > 0.0 && *local_error <= 1.0))
            throw ConfigError("config: local_error must lie in (0, 1]");
        if (threads < 1) throw ConfigError("config: threads must be >= 1");
        if (!(ml_pdf_tol > 0.0) || !(quad_tol > 0.0))
            throw ConfigError("config: tolerances must be positive");
    }

    /// Non-fatal complaints, surfaced in output notes.
    std::vector<std::string> warnings() const {
        std::vector<std::string> w;
        if (n_trials < 10000)
            w.push_back("n_trials=" + std::to_string(n_trials) +
                        " resolves error probabilities only down to about " +
                        std::to_string(10.0 / static_cast<double>(n_trials)) +
                        "; deeper rows are under-resolved");
        return w;
    }
};

struct BerRow {
    double snr_db;
    std::string detector;
    int l;
    double empirical_pe;
    double theoretical_pe;  ///< NaN when no closed form backs the value
    std::uint64_t n_trials;
    double wilson_halfwidth;
};

struct BerCurve {
    std::vector<BerRow> rows;
    std::vector<std::string> notes;
};

/// 95% Wilson interval halfwidth for an error count of p_hat * n over n.
inline double wilson_halfwidth(double p_hat, double n, double z = 1.96) {
    if (!(n > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    double z2 = z * z;
    return z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
}

namespace detail {

/// Per-point detector bank: ready entries decide observations; entries whose
/// construction failed are carried with the reason so sweeps can report them
/// per row instead of aborting.
struct DetectorBank {
    struct Entry {
        DetectorId id;
        std::function<Decision(const std::vector<double>&)> decide;
        double theoretical_pe;
    };
    struct Failed {
        DetectorId id;
        std::string reason;
    };
    std::vector<Entry> ready;
    std::vector<Failed> failed;
};

struct BankOptions {
    double ml_pdf_tol = 1e-6;
    double quad_tol = 1e-6;
    int mixed_grid = 50;
    bool report_theory = true;  ///< false for plug-in banks built from estimates
    std::shared_ptr<DensityTable> h0_table;  ///< optional prebuilt ML tables
    std::shared_ptr<DensityTable> h1_table;
};

inline DetectorBank build_bank(const StableParams& h0, const StableParams& h1,
                               const std::vector<DetectorId>& ids, std::size_t l,
                               double prior_h1, const BankOptions& opt) {
    DetectorBank bank;
    const double no_theory = std::numeric_limits<double>::quiet_NaN();
    for (DetectorId id : ids) {
        try {
            switch (id) {
            case DetectorId::ml: {
                Density d0 = opt.h0_table ? Density(h0, opt.h0_table) : Density(h0, opt.ml_pdf_tol);
                Density d1 = opt.h1_table ? Density(h1, opt.h1_table) : Density(h1, opt.ml_pdf_tol);
                auto det = std::make_shared<MlDetector>(std::move(d0), std::move(d1), prior_h1);
                bank.ready.push_back(
                    {id, [det](const std::vector<double>& obs) { return (*det)(obs); },
                     no_theory});
                break;
            }
            case DetectorId::flom:
            case DetectorId::signed_flom: {
                StatKind::Family fam = id == DetectorId::flom ? StatKind::Family::flom
                                                              : StatKind::Family::signed_flom;
                double p = optimize_p(fam, h0, h1, l, prior_h1);
                StatKind kind = fam == StatKind::Family::flom ? StatKind::flom(p)
                                                              : StatKind::signed_flom(p);
                MomentSummary s = summarize(kind, h0, h1, l, prior_h1);
                bank.ready.push_back({id,
                                      [kind, s](const std::vector<double>& obs) {
                                          return lrt_1d(obs, kind, s);
                                      },
                                      opt.report_theory ? theoretical_pe_1d(s) : no_theory});
                break;
            }
            case DetectorId::log_abs: {
                StatKind kind = StatKind::log_abs();
                MomentSummary s = summarize(kind, h0, h1, l, prior_h1);
                bank.ready.push_back({id,
                                      [kind, s](const std::vector<double>& obs) {
                                          return lrt_1d(obs, kind, s);
                                      },
                                      opt.report_theory ? theoretical_pe_1d(s) : no_theory});
                break;
            }
            case DetectorId::mixed:
            case DetectorId::mixed_indep: {
                bool indep = id == DetectorId::mixed_indep;
                auto [p1, p2] = optimize_p_mixed(h0, h1, l, indep, opt.quad_tol,
                                                 opt.mixed_grid, prior_h1);
                BivariateSummary s =
                    summarize_mixed(h0, h1, p1, p2, l, indep, 1e12, prior_h1);
                bank.ready.push_back(
                    {id, [s](const std::vector<double>& obs) { return lrt_2d(obs, s); },
                     opt.report_theory ? theoretical_pe_mixed(s, opt.quad_tol) : no_theory});
                break;
            }
            }
        } catch (const std::exception& e) {
            bank.failed.push_back({id, e.what()});
        }
    }
    return bank;
}

/// Error counts for one contiguous block of trials at one sweep point.
/// Trial k draws from H1 when k is odd; its engine depends only on
/// (point seed, k), so any partition over threads yields the same counts.
struct BlockCounts {
    std::vector<std::array<std::uint64_t, 2>> errs;  // per entry: {under H0, under H1}
    std::uint64_t n0 = 0, n1 = 0;
};

inline BlockCounts run_trials(const DetectorBank& bank, const StableParams& law0,
                              const StableParams& law1, std::size_t l,
                              std::uint64_t trial_base, std::uint64_t first,
                              std::uint64_t last, int threads) {
    BlockCounts total;
    total.errs.assign(bank.ready.size(), {0, 0});
    if (last <= first) return total;
    StableSampler s0(law0), s1(law1);

    auto worker = [&](std::uint64_t begin, std::uint64_t end, BlockCounts& out) {
        out.errs.assign(bank.ready.size(), {0, 0});
        std::vector<double> obs(l);
        for (std::uint64_t k = begin; k < end; ++k) {
            bool h1 = (k % 2) == 1;
            std::mt19937_64 eng(derive_seed(trial_base, k));
            const StableSampler& s = h1 ? s1 : s0;
            for (std::size_t i = 0; i < l; ++i) obs[i] = s(eng);
            (h1 ? out.n1 : out.n0) += 1;
            for (std::size_t d = 0; d < bank.ready.size(); ++d)
                if (bank.ready[d].decide(obs).is_h1 != h1) out.errs[d][h1 ? 1 : 0] += 1;
        }
    };

    int nw = std::max(1, threads);
    if (nw == 1) {
        worker(first, last, total);
        return total;
    }
    std::vector<BlockCounts> parts(nw);
    std::vector<std::thread> pool;
    std::uint64_t span = last - first;
    for (int w = 0; w < nw; ++w) {
        std::uint64_t b = first + span * w / nw;
        std::uint64_t e = first + span * (w + 1) / nw;
        pool.emplace_back(worker, b, e, std::ref(parts[w]));
    }
    for (auto& t : pool) t.join();
    for (const auto& p : parts) {
        total.n0 += p.n0;
        total.n1 += p.n1;
        for (std::size_t d = 0; d < total.errs.size(); ++d) {
            total.errs[d][0] += p.errs[d][0];
            total.errs[d][1] += p.errs[d][1];
        }
    }
    return total;
}

inline double pooled_pe(const BlockCounts& c, std::size_t d) {
    double pe0 = c.n0 ? static_cast<double>(c.errs[d][0]) / static_cast<double>(c.n0) : 0.0;
    double pe1 = c.n1 ? static_cast<double>(c.errs[d][1]) / static_cast<double>(c.n1) : 0.0;
    return 0.5 * (pe0 + pe1);
}

inline std::string point_label(double snr_db, int l) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snr=%g dB, L=%d", snr_db, l);
    return buf;
}

}  // namespace detail

/// Exact-parameter Monte Carlo sweep over (L, snr) points. The interference
/// scale is pinned at 1 and each snr point solves the signal scale from the
/// power ratio; an optional local reporting error shifts the effective snr
/// by 10 log10 P before the model is built.
inline BerCurve run_ber_sweep(const SweepConfig& cfg) {
    cfg.check();
    BerCurve out;
    out.notes = cfg.warnings();
    double snr_shift = cfg.local_error ? 10.0 * std::log10(*cfg.local_error) : 0.0;

    // the interference law is the same at every point, so ML shares one table
    std::shared_ptr<DensityTable> h0_table;
    bool wants_ml = std::count(cfg.detectors.begin(), cfg.detectors.end(), DetectorId::ml) > 0;
    if (wants_ml) {
        HypothesisModel any = model_for_snr(cfg.alpha, cfg.snr_grid.front() + snr_shift);
        h0_table = Density(any.h0_params(), cfg.ml_pdf_tol).table_ptr();
    }

    std::uint64_t point_index = 0;
    for (int l : cfg.l_values) {
        for (double snr : cfg.snr_grid) {
            HypothesisModel model = model_for_snr(cfg.alpha, snr + snr_shift);
            detail::BankOptions opt;
            opt.ml_pdf_tol = cfg.ml_pdf_tol;
            opt.quad_tol = cfg.quad_tol;
            opt.h0_table = h0_table;
            detail::DetectorBank bank = detail::build_bank(
                model.h0_params(), model.h1_params(), cfg.detectors,
                static_cast<std::size_t>(l), model.prior_h1, opt);

            std::uint64_t point_seed = derive_seed(cfg.seed, point_index);
            std::uint64_t trial_base = derive_seed(point_seed, 0);
            detail::BlockCounts counts =
                detail::run_trials(bank, model.h0_params(), model.h1_params(),
                                   static_cast<std::size_t>(l), trial_base, 0, cfg.n_trials,
                                   cfg.threads);

            for (std::size_t d = 0; d < bank.ready.size(); ++d) {
                double pe = detail::pooled_pe(counts, d);
                out.rows.push_back({snr, detector_name(bank.ready[d].id), l, pe,
                                    bank.ready[d].theoretical_pe, cfg.n_trials,
                                    wilson_halfwidth(pe, static_cast<double>(cfg.n_trials))});
                if (pe < 10.0 / static_cast<double>(cfg.n_trials))
                    out.notes.push_back(std::string("under-resolved: ") +
                                        detector_name(bank.ready[d].id) + " at " +
                                        detail::point_label(snr, l));
            }
            for (const auto& f : bank.failed) {
                double nan = std::numeric_limits<double>::quiet_NaN();
                out.rows.push_back({snr, detector_name(f.id), l, nan, nan, 0, nan});
                out.notes.push_back(std::string("detector failed: ") + detector_name(f.id) +
                                    " at " + detail::point_label(snr, l) + ": " + f.reason);
            }
            ++point_index;
        }
    }
    return out;
}

/// Plug-in sweep: at every point the detectors are rebuilt from parameters
/// estimated on fresh calibration samples (n_e per hypothesis), refreshed
/// every refresh_period trials. Trial observation streams are identical to
/// run_ber_sweep's for the same (config, seed), so the only difference is
/// the plugged-in parameters.
inline BerCurve run_estimated_param_sweep(const SweepConfig& cfg) {
    cfg.check();
    if (!cfg.estimation)
        throw ConfigError("estimated sweep requires the estimation settings block");
    BerCurve out;
    out.notes = cfg.warnings();
    double snr_shift = cfg.local_error ? 10.0 * std::log10(*cfg.local_error) : 0.0;
    const EstimationSettings& es = *cfg.estimation;

    std::uint64_t point_index = 0;
    for (int l : cfg.l_values) {
        for (double snr : cfg.snr_grid) {
            HypothesisModel model = model_for_snr(cfg.alpha, snr + snr_shift);
            StableParams law0 = model.h0_params();
            StableParams law1 = model.h1_params();
            StableSampler cal0(law0), cal1(law1);

            std::uint64_t point_seed = derive_seed(cfg.seed, point_index);
            std::uint64_t trial_base = derive_seed(point_seed, 0);
            std::uint64_t est_base = derive_seed(point_seed, 1);

            // per-detector tallies; a detector skips trials in blocks where
            // its plug-in construction failed, so it carries its own counts
            auto ids = cfg.detectors;
            std::vector<std::array<std::uint64_t, 2>> errs(ids.size(), {0, 0});
            std::vector<std::array<std::uint64_t, 2>> seen(ids.size(), {0, 0});
            std::size_t refit_failures = 0;

            for (std::uint64_t start = 0, block = 0; start < cfg.n_trials;
                 start += es.refresh_period, ++block) {
                std::uint64_t stop = std::min(cfg.n_trials, start + es.refresh_period);
                auto calibrate = [&](const StableSampler& cal, std::uint64_t stream) {
                    std::mt19937_64 eng(derive_seed(est_base, 2 * block + stream));
                    std::vector<double> y(es.n_e);
                    for (auto& v : y) v = cal(eng);
                    try {
                        return estimate_params(y).params;
                    } catch (const ConvergenceError& e) {
                        ++refit_failures;  // keep the last iterate; it is still a law
                        return e.last;
                    }
                };
                StableParams est0 = calibrate(cal0, 0);
                StableParams est1 = calibrate(cal1, 1);

                detail::BankOptions opt;
                opt.ml_pdf_tol = std::max(cfg.ml_pdf_tol, 1e-5);  // refit tables are transient
                opt.quad_tol = std::max(cfg.quad_tol, 1e-5);
                opt.mixed_grid = 25;
                opt.report_theory = false;
                detail::DetectorBank bank =
                    detail::build_bank(est0, est1, ids, static_cast<std::size_t>(l),
                                       model.prior_h1, opt);
                detail::BlockCounts counts =
                    detail::run_trials(bank, law0, law1, static_cast<std::size_t>(l),
                                       trial_base, start, stop, cfg.threads);

                for (std::size_t d = 0; d < bank.ready.size(); ++d) {
                    auto slot = std::find(ids.begin(), ids.end(), bank.ready[d].id) -
                                ids.begin();
                    errs[slot][0] += counts.errs[d][0];
                    errs[slot][1] += counts.errs[d][1];
                    seen[slot][0] += counts.n0;
                    seen[slot][1] += counts.n1;
                }
                for (const auto& f : bank.failed)
                    out.notes.push_back(std::string("plug-in detector failed: ") +
                                        detector_name(f.id) + " at " +
                                        detail::point_label(snr, l) + " block " +
                                        std::to_string(block) + ": " + f.reason);
            }
            if (refit_failures > 0)
                out.notes.push_back("estimation non-convergence x" +
                                    std::to_string(refit_failures) + " at " +
                                    detail::point_label(snr, l));

            for (std::size_t d = 0; d < ids.size(); ++d) {
                std::uint64_t n = seen[d][0] + seen[d][1];
                double nan = std::numeric_limits<double>::quiet_NaN();
                if (n == 0) {
                    out.rows.push_back({snr, detector_name(ids[d]), l, nan, nan, 0, nan});
                    continue;
                }
                double pe0 = seen[d][0] ? static_cast<double>(errs[d][0]) /
                                              static_cast<double>(seen[d][0])
                                        : 0.0;
                double pe1 = seen[d][1] ? static_cast<double>(errs[d][1]) /
                                              static_cast<double>(seen[d][1])
                                        : 0.0;
                double pe = 0.5 * (pe0 + pe1);
                out.rows.push_back({snr, detector_name(ids[d]), l, pe, nan, n,
                                    wilson_halfwidth(pe, static_cast<double>(n))});
            }
            ++point_index;
        }
    }
    return out;
}

// ---- characteristic-function validation ----

struct CfValidationConfig {
    NetworkConfig network;
    std::uint64_t n_draws = 100000;
    double t_min = 0.1;
    double t_max = 5.0;
    int t_count = 25;
    std::uint64_t seed = 1;
    double cf_bias_tol = 1e-3;
    int threads = 1;

    void check() const {
        network.check();
        if (n_draws == 0) throw ConfigError("cf config: n_draws must be >= 1");
        if (!(t_min > 0.0) || !(t_max > t_min)) throw ConfigError("cf config: bad t range");
        if (t_count < 2) throw ConfigError("cf config: need at least two t points");
        if (threads < 1) throw ConfigError("cf config: threads must be >= 1");
    }
};

struct CfRow {
    std::string aggregate;  // "signal" or "interference"
    double delta;
    std::uint64_t n_draws;
    double max_abs_error;
    double worst_t;
    double bound;  // 4/sqrt(N)
    bool pass;
};

struct CfReport {
    std::vector<CfRow> rows;
    std::vector<std::string> notes;
};

/// Draws both spatial aggregates at a radius meeting the truncation-bias
/// budget and compares their empirical characteristic functions against the
/// limiting stable laws on a t grid.
inline CfReport run_cf_validation(const CfValidationConfig& cfg) {
    cfg.check();
    CfReport report;
    int which_index = 0;
    for (AggregateKind which : {AggregateKind::signal, AggregateKind::interference}) {
        StableParams limit = which == AggregateKind::signal
                                 ? signal_params(cfg.network)
                                 : interference_params(cfg.network);
        double radius = choose_radius(cfg.network, which, TailMode::gaussian, cfg.cf_bias_tol);
        AggregateSimulator sim(cfg.network, which, radius, TailMode::gaussian, cfg.cf_bias_tol);

        std::vector<double> draws(cfg.n_draws);
        std::uint64_t base = derive_seed(cfg.seed, static_cast<std::uint64_t>(which_index));
        auto worker = [&](std::uint64_t b, std::uint64_t e) {
            for (std::uint64_t i = b; i < e; ++i) {
                std::mt19937_64 eng(derive_seed(base, i));
                draws[i] = sim(eng);
            }
        };
        if (cfg.threads == 1) {
            worker(0, cfg.n_draws);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < cfg.threads; ++w)
                pool.emplace_back(worker, cfg.n_draws * w / cfg.threads,
                                  cfg.n_draws * (w + 1) / cfg.threads);
            for (auto& t : pool) t.join();
        }

        double worst = 0.0, worst_t = cfg.t_min;
        for (int i = 0; i < cfg.t_count; ++i) {
            double t = cfg.t_min + (cfg.t_max - cfg.t_min) * i / (cfg.t_count - 1.0);
            double err = std::abs(empirical_cf(draws, t) - char_fn(limit, t));
            if (err > worst) {
                worst = err;
                worst_t = t;
            }
        }
        double bound = 4.0 / std::sqrt(static_cast<double>(cfg.n_draws));
        report.rows.push_back({which == AggregateKind::signal ? "signal" : "interference",
                               cfg.network.delta, cfg.n_draws, worst, worst_t, bound,
                               worst <= bound});
        ++which_index;
    }
    return report;
}

// ---- p-sensitivity table ----

struct PSensitivityRow {
    double p;
    double flom_pe;
    double signed_pe;
    double log_pe;  // constant down the column; the log statistic has no exponent
};

/// Theoretical error probability against the statistic exponent, for the
/// three single-statistic detectors at one (alpha, snr, L) point.
inline std::vector<PSensitivityRow> run_p_sensitivity(double alpha, double snr_db,
                                                      std::size_t l, int grid_n = 40) {
    if (grid_n < 2) throw ConfigError("p sensitivity: need at least two grid points");
    HypothesisModel model = model_for_snr(alpha, snr_db);
    double log_pe = theoretical_pe_1d(summarize(StatKind::log_abs(), model, l));
    double eps = 1e-3 * alpha;
    double lo = eps, hi = alpha / 2.0 - eps;  // variance of |Y|^p needs 2p < alpha
    std::vector<PSensitivityRow> rows;
    rows.reserve(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        double p = lo + (hi - lo) * i / (grid_n - 1.0);
        rows.push_back({p, theoretical_pe_1d(summarize(StatKind::flom(p), model, l)),
                        theoretical_pe_1d(summarize(StatKind::signed_flom(p), model, l)),
                        log_pe});
    }
    return rows;
}

// ---- curve utilities ----

/// SNR where the detector's Pe curve crosses `target`, interpolating
/// linearly in (snr, log10 Pe). Exact zero counts are floored at half an
/// error; NaN when the curve never reaches the target.
inline double snr_at_pe(const BerCurve& curve, const std::string& detector, int l,
                        double target_pe, bool use_theoretical = false) {
    if (!(target_pe > 0.0 && target_pe < 1.0))
        throw std::invalid_argument("snr_at_pe: target must lie in (0, 1)");
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : curve.rows) {
        if (r.detector != detector || r.l != l) continue;
        double pe = use_theoretical ? r.theoretical_pe : r.empirical_pe;
        if (std::isnan(pe)) continue;
        if (r.n_trials > 0) pe = std::max(pe, 0.5 / static_cast<double>(r.n_trials));
        pts.emplace_back(r.snr_db, pe);
    }
    std::sort(pts.begin(), pts.end());
    double lt = std::log10(target_pe);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double a = std::log10(pts[i].second), b = std::log10(pts[i + 1].second);
        if ((a - lt) * (b - lt) > 0.0) continue;
        if (a == b) return 0.5 * (pts[i].first + pts[i + 1].first);
        return pts[i].first + (pts[i + 1].first - pts[i].first) * (lt - a) / (b - a);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// ---- serialization ----

namespace detail {

inline std::string fmt_g(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace detail

inline std::string to_csv(const BerCurve& curve) {
    std::string s = "snr_db,detector,L,empirical_pe,theoretical_pe,n_trials,wilson_halfwidth\n";
    for (const auto& r : curve.rows) {
        s += detail::fmt_g(r.snr_db) + ',' + r.detector + ',' + std::to_string(r.l) + ',' +
             detail::fmt_g(r.empirical_pe) + ',' + detail::fmt_g(r.theoretical_pe) + ',' +
             std::to_string(r.n_trials) + ',' + detail::fmt_g(r.wilson_halfwidth) + '\n';
    }
    return s;
}

inline std::string to_csv(const CfReport& report) {
    std::string s = "aggregate,delta,n_draws,max_abs_error,worst_t,bound,pass\n";
    for (const auto& r : report.rows) {
        s += r.aggregate + ',' + detail::fmt_g(r.delta) + ',' + std::to_string(r.n_draws) +
             ',' + detail::fmt_g(r.max_abs_error) + ',' + detail::fmt_g(r.worst_t) + ',' +
             detail::fmt_g(r.bound) + ',' + (r.pass ? "1" : "0") + '\n';
    }
    return s;
}

inline std::string to_csv(const std::vector<PSensitivityRow>& rows) {
    std::string s = "p,flom_pe,signed_pe,log_pe\n";
    for (const auto& r : rows)
        s += detail::fmt_g(r.p) + ',' + detail::fmt_g(r.flom_pe) + ',' +
             detail::fmt_g(r.signed_pe) + ',' + detail::fmt_g(r.log_pe) + '\n';
    return s;
}

}  // namespace stabledet
