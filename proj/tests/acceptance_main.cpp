// Acceptance gate: each numbered criterion prints [PASS]/[FAIL] lines and the
// process exits nonzero if any check in the requested criterion failed.
// Tolerances are pinned here, next to the checks they govern.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include <stabledet/harness.hpp>

using namespace stabledet;

namespace {

int g_failures = 0;

std::string strf(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

void check(bool ok, const std::string& label, const std::string& detail) {
    std::printf("[%s] %s  (%s)\n", ok ? "PASS" : "FAIL", label.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double mean_of(const std::vector<double>& v) {
    CompensatedSum s;
    for (double x : v) s.add(x);
    return s.value() / static_cast<double>(v.size());
}

// ---------------------------------------------------------------- criterion 1

// Spatial-aggregate law: empirical characteristic functions of both Poisson
// field aggregates match the limiting stable laws within the 4/sqrt(N)
// sampling envelope on t in [0.1, 5], at N = 1e5 draws, for path-loss
// delta = 4 (alpha = 0.5) and delta = 20/9 (alpha = 0.9).
void criterion_1() {
    for (double delta : {4.0, 20.0 / 9.0}) {
        CfValidationConfig cfg;
        cfg.network.lambda_d = 0.3;
        cfg.network.lambda_i = 0.3;
        cfg.network.delta = delta;
        cfg.n_draws = 100000;
        cfg.seed = 901;
        CfReport rep = run_cf_validation(cfg);
        for (const auto& r : rep.rows)
            check(r.pass,
                  strf("aggregate CF matches the stable limit, delta=%.4g, %s", delta,
                       r.aggregate.c_str()),
                  strf("max |ecf - cf| = %.5f at t = %.2f, bound = %.5f", r.max_abs_error,
                       r.worst_t, r.bound));
    }
}

// ---------------------------------------------------------------- criterion 2

// Moment formulas against 1e6-draw Monte Carlo oracles, within 3 standard
// errors: fractional absolute moment, its variance, the signed fractional
// moment, its corrected variance, log-moment mean and variance, and the
// mixed absolute/signed covariance. Grid: alpha in {0.5, 0.9}, beta in
// {0, 0.5, 1}, p at {0.1, 0.2} alpha (variances) plus 0.35 alpha (means).
void criterion_2() {
    const std::size_t n = 1000000;
    int combo = 0;
    for (double alpha : {0.5, 0.9}) {
        for (double beta : {0.0, 0.5, 1.0}) {
            StableParams law{alpha, 1.3, beta, 0.0};
            StableSampler sample(law);
            std::mt19937_64 eng(derive_seed(902, static_cast<std::uint64_t>(combo++)));
            std::vector<double> y(n);
            for (auto& v : y) v = sample(eng);

            auto tag = [&](const char* what, double p) {
                return strf("%s, alpha=%.1f beta=%.1f p=%.3f", what, alpha, beta, p);
            };
            auto within = [](double closed, double mc, double se) {
                return strf("closed %.6g vs mc %.6g, |diff|/se = %.2f", closed, mc,
                            std::abs(closed - mc) / se);
            };

            std::vector<double> u(n), s(n), lg(n);
            for (double p : {0.1 * alpha, 0.2 * alpha, 0.35 * alpha}) {
                for (std::size_t i = 0; i < n; ++i) {
                    u[i] = std::pow(std::abs(y[i]), p);
                    s[i] = y[i] < 0.0 ? -u[i] : u[i];
                }
                double mu = mean_of(u), ms = mean_of(s);
                CompensatedSum vu, vs;
                for (std::size_t i = 0; i < n; ++i) {
                    vu.add((u[i] - mu) * (u[i] - mu));
                    vs.add((s[i] - ms) * (s[i] - ms));
                }
                double var_u = vu.value() / static_cast<double>(n - 1);
                double var_s = vs.value() / static_cast<double>(n - 1);
                double se_u = std::sqrt(var_u / static_cast<double>(n));
                double se_s = std::sqrt(var_s / static_cast<double>(n));

                double fm = flom_mean(law, p);
                check(std::abs(fm - mu) <= 3.0 * se_u, tag("absolute fractional moment", p),
                      within(fm, mu, se_u));
                double sm = signed_flom_mean(law, p);
                check(std::abs(sm - ms) <= 3.0 * se_s, tag("signed fractional moment", p),
                      within(sm, ms, se_s));

                if (p <= 0.2 * alpha + 1e-12) {
                    // sample-variance standard error needs the fourth moment,
                    // finite here because 4p <= 0.8 alpha < alpha
                    CompensatedSum q4u, q4s;
                    for (std::size_t i = 0; i < n; ++i) {
                        double du = (u[i] - mu) * (u[i] - mu);
                        double ds = (s[i] - ms) * (s[i] - ms);
                        q4u.add(du * du);
                        q4s.add(ds * ds);
                    }
                    double se_vu = std::sqrt((q4u.value() / static_cast<double>(n) -
                                              var_u * var_u) / static_cast<double>(n));
                    double se_vs = std::sqrt((q4s.value() / static_cast<double>(n) -
                                              var_s * var_s) / static_cast<double>(n));
                    double fv = statistic_variance(StatKind::flom(p), law);
                    check(std::abs(fv - var_u) <= 3.0 * se_vu,
                          tag("absolute moment variance", p), within(fv, var_u, se_vu));
                    double sv = statistic_variance(StatKind::signed_flom(p), law);
                    check(std::abs(sv - var_s) <= 3.0 * se_vs,
                          tag("signed moment variance, corrected", p),
                          within(sv, var_s, se_vs));
                    if (beta == 0.5) {
                        // the as-printed variant plugs the signed moment into the
                        // second moment slot; for 0 < beta < 1 that is visibly not
                        // the variance
                        double bad = statistic_variance(StatKind::signed_flom(p), law, true);
                        check(std::abs(bad - var_s) > 3.0 * se_vs,
                              tag("as-printed signed variance rejected", p),
                              within(bad, var_s, se_vs));
                    }
                }
            }

            for (std::size_t i = 0; i < n; ++i) lg[i] = std::log(std::abs(y[i]));
            double ml = mean_of(lg);
            CompensatedSum vl;
            for (std::size_t i = 0; i < n; ++i) vl.add((lg[i] - ml) * (lg[i] - ml));
            double var_l = vl.value() / static_cast<double>(n - 1);
            CompensatedSum q4l;
            for (std::size_t i = 0; i < n; ++i) {
                double d = (lg[i] - ml) * (lg[i] - ml);
                q4l.add(d * d);
            }
            double se_l = std::sqrt(var_l / static_cast<double>(n));
            double se_vl = std::sqrt(
                (q4l.value() / static_cast<double>(n) - var_l * var_l) /
                static_cast<double>(n));
            auto [lm, lv] = log_moments(law);
            check(std::abs(lm - ml) <= 3.0 * se_l,
                  strf("log moment mean, alpha=%.1f beta=%.1f", alpha, beta),
                  strf("closed %.6g vs mc %.6g, |diff|/se = %.2f", lm, ml,
                       std::abs(lm - ml) / se_l));
            check(std::abs(lv - var_l) <= 3.0 * se_vl,
                  strf("log moment variance, alpha=%.1f beta=%.1f", alpha, beta),
                  strf("closed %.6g vs mc %.6g, |diff|/se = %.2f", lv, var_l,
                       std::abs(lv - var_l) / se_vl));

            {
                double p1 = 0.1 * alpha, p2 = 0.12 * alpha;
                for (std::size_t i = 0; i < n; ++i) {
                    u[i] = std::pow(std::abs(y[i]), p1);
                    double t = std::pow(std::abs(y[i]), p2);
                    s[i] = y[i] < 0.0 ? -t : t;
                }
                double mu = mean_of(u), ms = mean_of(s);
                CompensatedSum cv, cw;
                for (std::size_t i = 0; i < n; ++i) {
                    double d = (u[i] - mu) * (s[i] - ms);
                    cv.add(d);
                    cw.add(d * d);
                }
                double cov = cv.value() / static_cast<double>(n - 1);
                double se_cov = std::sqrt(
                    (cw.value() / static_cast<double>(n) - cov * cov) /
                    static_cast<double>(n));
                double mc = mixed_covariance(law, p1, p2);
                check(std::abs(mc - cov) <= 3.0 * se_cov,
                      strf("mixed moment covariance, alpha=%.1f beta=%.1f", alpha, beta),
                      strf("closed %.6g vs mc %.6g, |diff|/se = %.2f", mc, cov,
                           std::abs(mc - cov) / se_cov));
            }
        }
    }
}

// ------------------------------------------------------------- criteria 3 & 4

double crossing(const BerCurve& curve, const char* det, int l, double target = 1e-3) {
    return snr_at_pe(curve, det, l, target);
}

// alpha = 0.5 performance map at 1e5 trials. At the 1e-3 error rate: the
// mixed detector trails the likelihood-ratio detector by 2 +- 0.75 dB at
// L=10 and by at most 0.75 dB at L=100; the single-statistic detectors trail
// by more than 2.5 dB at L=10.
void criterion_3() {
    SweepConfig ten;
    ten.alpha = 0.5;
    ten.l_values = {10};
    ten.snr_grid = {3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18};
    ten.detectors = all_detectors();
    ten.n_trials = 100000;
    ten.seed = 903;
    BerCurve c10 = run_ber_sweep(ten);

    double ml = crossing(c10, "ML", 10);
    double mixed = crossing(c10, "MIXED", 10);
    check(std::isfinite(ml) && std::isfinite(mixed) && std::abs((mixed - ml) - 2.0) <= 0.75,
          "L=10 mixed-to-ML gap at Pe=1e-3 is 2 dB +- 0.75 dB",
          strf("ML at %.2f dB, mixed at %.2f dB, gap %.2f dB", ml, mixed, mixed - ml));
    for (const char* det : {"FLOM", "SIGNED", "LOG"}) {
        double s = crossing(c10, det, 10);
        // a crossing beyond the grid end still clears the lower bound
        double gap = std::isfinite(s) ? s - ml : ten.snr_grid.back() - ml;
        check(gap > 2.5, strf("L=10 %s-to-ML gap at Pe=1e-3 exceeds 2.5 dB", det),
              std::isfinite(s) ? strf("crossing %.2f dB, gap %.2f dB", s, gap)
                               : strf("no crossing by %.0f dB, gap > %.2f dB",
                                      ten.snr_grid.back(), gap));
    }

    SweepConfig hundred;
    hundred.alpha = 0.5;
    hundred.l_values = {100};
    hundred.snr_grid = {-5, -4.5, -4, -3.5, -3, -2.5, -2, -1.5, -1};
    hundred.detectors = {DetectorId::ml, DetectorId::mixed};
    hundred.n_trials = 100000;
    hundred.seed = 913;
    BerCurve c100 = run_ber_sweep(hundred);
    double ml100 = crossing(c100, "ML", 100);
    double mx100 = crossing(c100, "MIXED", 100);
    check(std::isfinite(ml100) && std::isfinite(mx100) && mx100 - ml100 <= 0.75,
          "L=100 mixed-to-ML gap at Pe=1e-3 is at most 0.75 dB",
          strf("ML at %.2f dB, mixed at %.2f dB, gap %.2f dB", ml100, mx100,
               mx100 - ml100));
}

// alpha = 0.9 (path loss near free space): at L=100 the mixed detector stays
// within 1.0 dB of the likelihood-ratio detector at the 1e-3 error rate.
void criterion_4() {
    SweepConfig cfg;
    cfg.alpha = 0.9;
    cfg.l_values = {100};
    cfg.snr_grid = {-11, -10.5, -10, -9.5, -9, -8.5, -8, -7.5, -7, -6.5};
    cfg.detectors = {DetectorId::ml, DetectorId::mixed};
    cfg.n_trials = 100000;
    cfg.seed = 904;
    BerCurve curve = run_ber_sweep(cfg);
    double ml = crossing(curve, "ML", 100);
    double mixed = crossing(curve, "MIXED", 100);
    check(std::isfinite(ml) && std::isfinite(mixed) && mixed - ml <= 1.0,
          "alpha=0.9, L=100: mixed within 1.0 dB of ML at Pe=1e-3",
          strf("ML at %.2f dB, mixed at %.2f dB, gap %.2f dB", ml, mixed, mixed - ml));
}

// ---------------------------------------------------------------- criterion 5

// Plug-in robustness. The comparison lives at L=10 and high SNR, where the
// H1 skew approaches 1 and 100-sample refits are fragile: a few bad fits per
// sweep poison whole calibration blocks of the plug-in ML detector while the
// mixed detector, which only needs moments, shrugs them off. With n_e = 1000
// the fits tighten and the ML detector is back in front within Wilson
// intervals. Mid-grid means the interior points (10, 12, 14 dB); the pdf
// tables use a 1e-4 tolerance because each calibration block rebuilds them.
void criterion_5() {
    SweepConfig cfg;
    cfg.alpha = 0.5;
    cfg.l_values = {10};
    cfg.snr_grid = {8, 10, 12, 14, 16};
    cfg.detectors = {DetectorId::ml, DetectorId::mixed};
    cfg.n_trials = 25000;
    cfg.seed = 905;
    cfg.ml_pdf_tol = 1e-4;
    cfg.estimation = EstimationSettings{100, 250};

    auto tally = [&](const BerCurve& curve, bool mixed_leads) {
        int mid = 0, hits = 0;
        std::string detail;
        for (std::size_t i = 1; i + 1 < cfg.snr_grid.size(); ++i) {
            double snr = cfg.snr_grid[i];
            const BerRow *ml = nullptr, *mx = nullptr;
            for (const auto& r : curve.rows) {
                if (r.snr_db != snr) continue;
                (r.detector == "ML" ? ml : mx) = &r;
            }
            ++mid;
            bool hit = mixed_leads
                           ? mx->empirical_pe <= ml->empirical_pe
                           : ml->empirical_pe <=
                                 mx->empirical_pe + ml->wilson_halfwidth + mx->wilson_halfwidth;
            hits += hit ? 1 : 0;
            detail += strf("%s%g dB: ml %.4g mx %.4g", detail.empty() ? "" : "; ", snr,
                           ml->empirical_pe, mx->empirical_pe);
        }
        return std::pair<std::string, bool>(detail, 2 * hits > mid);
    };

    BerCurve small = run_estimated_param_sweep(cfg);
    auto [d100, ok100] = tally(small, true);
    check(ok100, "n_e=100: mixed matches or beats plug-in ML at most mid-grid points", d100);

    cfg.n_trials = 20000;
    cfg.estimation = EstimationSettings{1000, 250};
    cfg.seed = 906;
    BerCurve big = run_estimated_param_sweep(cfg);
    auto [d1000, ok1000] = tally(big, false);
    check(ok1000, "n_e=1000: plug-in ML back in front within Wilson intervals", d1000);
}

// ---------------------------------------------------------------- criterion 6

// Independence-mode mixed detector: dropping the cross-covariance costs at
// most 0.3 dB at L=100 (Pe=1e-3), and at L=10 it does not underperform the
// full detector at high SNR.
void criterion_6() {
    SweepConfig hundred;
    hundred.alpha = 0.5;
    hundred.l_values = {100};
    hundred.snr_grid = {-5, -4.5, -4, -3.5, -3, -2.5, -2, -1.5, -1};
    hundred.detectors = {DetectorId::mixed, DetectorId::mixed_indep};
    hundred.n_trials = 100000;
    hundred.seed = 916;
    BerCurve c100 = run_ber_sweep(hundred);
    double full = crossing(c100, "MIXED", 100);
    double indep = crossing(c100, "MIXED-INDEP", 100);
    check(std::isfinite(full) && std::isfinite(indep) && std::abs(indep - full) <= 0.3,
          "L=100: independence mode within 0.3 dB of the full mixed detector",
          strf("full at %.3f dB, independence at %.3f dB, |gap| %.3f dB", full, indep,
               std::abs(indep - full)));

    SweepConfig ten;
    ten.alpha = 0.5;
    ten.l_values = {10};
    ten.snr_grid = {8, 10, 12};
    ten.detectors = {DetectorId::mixed, DetectorId::mixed_indep};
    ten.n_trials = 100000;
    ten.seed = 926;
    BerCurve c10 = run_ber_sweep(ten);
    for (double snr : ten.snr_grid) {
        const BerRow *full_r = nullptr, *ind_r = nullptr;
        for (const auto& r : c10.rows) {
            if (r.snr_db != snr) continue;
            (r.detector == "MIXED" ? full_r : ind_r) = &r;
        }
        check(ind_r->empirical_pe <=
                  full_r->empirical_pe + ind_r->wilson_halfwidth + full_r->wilson_halfwidth,
              strf("L=10, %g dB: independence mode does not underperform", snr),
              strf("full %.5g, independence %.5g", full_r->empirical_pe,
                   ind_r->empirical_pe));
    }
}

// ---------------------------------------------------------------- criterion 7

// Property suite: the module invariants re-asserted end to end.
void criterion_7() {
    {  // error probability of the absolute-moment detector rises with p
        auto rows = run_p_sensitivity(0.5, 4.0, 10, 40);
        bool mono = true;
        for (std::size_t i = 1; i < rows.size(); ++i)
            mono = mono && rows[i].flom_pe >= rows[i - 1].flom_pe - 1e-12;
        check(mono, "FLOM theoretical Pe is nondecreasing in p",
              strf("Pe(p_min)=%.5g, Pe(p_max)=%.5g over %zu points", rows.front().flom_pe,
                   rows.back().flom_pe, rows.size()));

        std::size_t best = 0;
        bool unimodal = true;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].signed_pe < rows[best].signed_pe) best = i;
        for (std::size_t i = 0; i < best; ++i)
            unimodal = unimodal && rows[i].signed_pe >= rows[i + 1].signed_pe - 1e-12;
        for (std::size_t i = best; i + 1 < rows.size(); ++i)
            unimodal = unimodal && rows[i].signed_pe <= rows[i + 1].signed_pe + 1e-12;
        check(unimodal && best > 0 && best + 1 < rows.size(),
              "signed-moment theoretical Pe is unimodal with an interior optimum",
              strf("optimum p = %.4f, Pe = %.5g", rows[best].p, rows[best].signed_pe));
    }

    {  // likelihood-ratio dominance at a well-approximated operating point
        SweepConfig cfg;
        cfg.alpha = 0.5;
        cfg.l_values = {100};
        cfg.snr_grid = {-2, 2};
        cfg.detectors = all_detectors();
        cfg.n_trials = 20000;
        cfg.seed = 907;
        BerCurve curve = run_ber_sweep(cfg);
        for (double snr : cfg.snr_grid) {
            const BerRow* ml = nullptr;
            for (const auto& r : curve.rows)
                if (r.detector == "ML" && r.snr_db == snr) ml = &r;
            for (const auto& r : curve.rows) {
                if (r.snr_db != snr || r.detector == "ML" || std::isnan(r.theoretical_pe))
                    continue;
                check(ml->empirical_pe <=
                          r.theoretical_pe + ml->wilson_halfwidth + 0.005,
                      strf("ML dominance vs %s at %g dB", r.detector.c_str(), snr),
                      strf("ml %.5g <= %s theory %.5g + slack", ml->empirical_pe,
                           r.detector.c_str(), r.theoretical_pe));
            }
        }
    }

    {  // threshold self-consistency: the reported theoretical Pe reproduces
       // the normal error integrals at the detector's own thresholds
        bool ok = true;
        std::string worst;
        double worst_err = 0.0;
        for (double alpha : {0.5, 0.9})
            for (double snr : {0.0, 4.0})
                for (std::size_t l : {std::size_t{10}, std::size_t{100}}) {
                    HypothesisModel m = model_for_snr(alpha, snr);
                    for (StatKind kind : {StatKind::flom(0.1 * alpha),
                                          StatKind::signed_flom(0.1 * alpha),
                                          StatKind::log_abs()}) {
                        MomentSummary s = summarize(kind, m, l);
                        Thresholds1D th = thresholds_1d(s);
                        auto cdf = [](double x, double mu, double var) {
                            return 0.5 * std::erfc(-(x - mu) / std::sqrt(2.0 * var));
                        };
                        double in0 = cdf(th.t2, s.mu_h0, s.var_h0) -
                                     cdf(th.t1, s.mu_h0, s.var_h0);
                        double in1 = cdf(th.t2, s.mu_h1, s.var_h1) -
                                     cdf(th.t1, s.mu_h1, s.var_h1);
                        double p10, p11;  // P(decide H1 | Hk)
                        if (th.region == Thresholds1D::H1Region::none) {
                            p10 = p11 = 0.0;
                        } else if (th.region == Thresholds1D::H1Region::inside) {
                            p10 = in0;
                            p11 = in1;
                        } else {
                            p10 = 1.0 - in0;
                            p11 = 1.0 - in1;
                        }
                        double pe = 0.5 * p10 + 0.5 * (1.0 - p11);
                        double err = std::abs(pe - theoretical_pe_1d(s));
                        if (err > worst_err) {
                            worst_err = err;
                            worst = strf("alpha=%.1f snr=%g L=%zu", alpha, snr, l);
                        }
                        ok = ok && err <= 1e-12;
                    }
                }
        check(ok, "thresholds reproduce the reported theoretical Pe",
              strf("worst |recomputed - reported| = %.3g at %s", worst_err, worst.c_str()));
    }

    {  // thinning law: a local reporting error P relabels the curve by exactly
       // 10 log10 P, decision for decision
        SweepConfig thinned;
        thinned.alpha = 0.5;
        thinned.l_values = {10};
        thinned.snr_grid = {6.0};
        thinned.detectors = {DetectorId::flom, DetectorId::log_abs, DetectorId::mixed};
        thinned.n_trials = 5000;
        thinned.seed = 908;
        thinned.local_error = 0.25;
        SweepConfig plain = thinned;
        plain.local_error.reset();
        plain.snr_grid = {6.0 + 10.0 * std::log10(0.25)};
        BerCurve a = run_ber_sweep(thinned);
        BerCurve b = run_ber_sweep(plain);
        bool same = a.rows.size() == b.rows.size();
        for (std::size_t i = 0; same && i < a.rows.size(); ++i)
            same = a.rows[i].empirical_pe == b.rows[i].empirical_pe;
        check(same, "local-error thinning equals an exact 10 log10 P snr shift",
              strf("%zu rows compared decision-for-decision at P=0.25", a.rows.size()));
    }

    {  // scale equivariance: verdicts are unchanged when the model and the
       // observations are rescaled together
        const double c = 7.3;
        HypothesisModel model = model_for_snr(0.5, 4.0);
        HypothesisModel scaled(model.alpha, c * model.sigma_h1, model.beta_h1,
                               c * model.sigma_h0, model.prior_h1);
        StatKind kinds[] = {StatKind::flom(0.05), StatKind::signed_flom(0.05),
                            StatKind::log_abs()};
        MomentSummary base[3], big[3];
        for (int i = 0; i < 3; ++i) {
            base[i] = summarize(kinds[i], model, 10);
            big[i] = summarize(kinds[i], scaled, 10);
        }
        BivariateSummary mb = summarize_mixed(model, 0.05, 0.05, 10);
        BivariateSummary ms = summarize_mixed(scaled, 0.05, 0.05, 10);
        MlDetector ml_base(model), ml_big(scaled);
        StableSampler s0(model.h0_params()), s1(model.h1_params());
        std::mt19937_64 eng(909);
        int mismatches = 0, trials = 500;
        std::vector<double> obs(10), scaled_obs(10);
        for (int k = 0; k < trials; ++k) {
            const StableSampler& s = k % 2 ? s1 : s0;
            for (int i = 0; i < 10; ++i) {
                obs[i] = s(eng);
                scaled_obs[i] = c * obs[i];
            }
            for (int i = 0; i < 3; ++i)
                if (lrt_1d(obs, kinds[i], base[i]).is_h1 !=
                    lrt_1d(scaled_obs, kinds[i], big[i]).is_h1)
                    ++mismatches;
            if (lrt_2d(obs, mb).is_h1 != lrt_2d(scaled_obs, ms).is_h1) ++mismatches;
            if (ml_base(obs).is_h1 != ml_big(scaled_obs).is_h1) ++mismatches;
        }
        check(mismatches == 0, "verdicts are scale equivariant",
              strf("%d mismatches over %d trials x 5 detectors", mismatches, trials));
    }

    {  // determinism: the same (config, seed) reproduces the byte-exact CSV,
       // and a different seed does not
        SweepConfig cfg;
        cfg.alpha = 0.5;
        cfg.l_values = {10};
        cfg.snr_grid = {0.0, 4.0};
        cfg.detectors = {DetectorId::flom, DetectorId::mixed};
        cfg.n_trials = 2000;
        cfg.seed = 910;
        std::string a = to_csv(run_ber_sweep(cfg));
        std::string b = to_csv(run_ber_sweep(cfg));
        cfg.seed = 911;
        std::string c = to_csv(run_ber_sweep(cfg));
        check(a == b && a != c, "sweeps are deterministic in (config, seed)",
              strf("repeat identical: %s; new seed distinct: %s", a == b ? "yes" : "no",
                   a != c ? "yes" : "no"));

        CfValidationConfig cf;
        cf.network.lambda_d = 0.3;
        cf.network.lambda_i = 0.3;
        cf.n_draws = 20000;
        cf.seed = 912;
        check(to_csv(run_cf_validation(cf)) == to_csv(run_cf_validation(cf)),
              "aggregate validation is deterministic in the seed", "byte-equal reports");
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <criterion 1-7>\n");
        return 2;
    }
    int crit = std::atoi(argv[1]);
    switch (crit) {
    case 1: criterion_1(); break;
    case 2: criterion_2(); break;
    case 3: criterion_3(); break;
    case 4: criterion_4(); break;
    case 5: criterion_5(); break;
    case 6: criterion_6(); break;
    case 7: criterion_7(); break;
    default:
        std::fprintf(stderr, "usage: acceptance <criterion 1-7>\n");
        return 2;
    }
    if (g_failures > 0) {
        std::printf("criterion %d: %d check(s) failed\n", crit, g_failures);
        return 1;
    }
    std::printf("criterion %d: all checks passed\n", crit);
    return 0;
}
