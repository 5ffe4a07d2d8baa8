#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <stabledet/harness.hpp>

using nlohmann::json;
using namespace stabledet;

namespace {

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    return j;
}

void require_keys(const json& obj, const char* where,
                  std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
    }
}

double alpha_from(const json& j) {
    bool has_a = j.contains("alpha"), has_d = j.contains("delta");
    if (has_a && has_d) throw ConfigError("config: give alpha or delta, not both");
    if (has_d) {
        double d = j.at("delta").get<double>();
        if (!(d > 0.0)) throw ConfigError("config: delta must be positive");
        return 2.0 / d;
    }
    if (has_a) return j.at("alpha").get<double>();
    return 0.5;
}

SweepConfig sweep_from_json(const json& j) {
    require_keys(j, "config",
                 {"alpha", "delta", "L", "snr_grid", "detectors", "n_trials", "seed",
                  "estimation", "local_error", "output_path", "ml_pdf_tol", "quad_tol",
                  "threads"});
    SweepConfig cfg;
    try {
        cfg.alpha = alpha_from(j);
        if (j.contains("L")) {
            cfg.l_values.clear();
            if (j.at("L").is_array())
                for (const auto& v : j.at("L")) cfg.l_values.push_back(v.get<int>());
            else
                cfg.l_values.push_back(j.at("L").get<int>());
        }
        if (j.contains("snr_grid")) cfg.snr_grid = j.at("snr_grid").get<std::vector<double>>();
        if (j.contains("detectors")) {
            cfg.detectors.clear();
            for (const auto& v : j.at("detectors"))
                cfg.detectors.push_back(detector_from_name(v.get<std::string>()));
        }
        if (j.contains("n_trials")) cfg.n_trials = j.at("n_trials").get<std::uint64_t>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("estimation")) {
            const json& e = j.at("estimation");
            require_keys(e, "config.estimation", {"n_e", "refresh_period"});
            EstimationSettings es;
            es.n_e = e.at("n_e").get<std::size_t>();
            if (e.contains("refresh_period"))
                es.refresh_period = e.at("refresh_period").get<std::size_t>();
            cfg.estimation = es;
        }
        if (j.contains("local_error")) cfg.local_error = j.at("local_error").get<double>();
        if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
        if (j.contains("ml_pdf_tol")) cfg.ml_pdf_tol = j.at("ml_pdf_tol").get<double>();
        if (j.contains("quad_tol")) cfg.quad_tol = j.at("quad_tol").get<double>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }
    return cfg;
}

json sweep_echo(const SweepConfig& c) {
    json detectors = json::array();
    for (DetectorId d : c.detectors) detectors.push_back(detector_name(d));
    json j{{"alpha", c.alpha},
           {"L", c.l_values},
           {"snr_grid", c.snr_grid},
           {"detectors", detectors},
           {"n_trials", c.n_trials},
           {"seed", c.seed},
           {"ml_pdf_tol", c.ml_pdf_tol},
           {"quad_tol", c.quad_tol},
           {"threads", c.threads}};
    if (c.estimation)
        j["estimation"] = {{"n_e", c.estimation->n_e},
                           {"refresh_period", c.estimation->refresh_period}};
    if (c.local_error) j["local_error"] = *c.local_error;
    return j;
}

CfValidationConfig cf_from_json(const json& j) {
    require_keys(j, "config",
                 {"delta", "lambda_d", "lambda_i", "fading", "m_amplitude", "w_amplitude",
                  "local_error", "n_draws", "t_min", "t_max", "t_count", "seed",
                  "cf_bias_tol", "threads"});
    CfValidationConfig cfg;
    cfg.network.lambda_d = 0.3;
    cfg.network.lambda_i = 0.3;
    try {
        if (j.contains("delta")) cfg.network.delta = j.at("delta").get<double>();
        if (j.contains("lambda_d")) cfg.network.lambda_d = j.at("lambda_d").get<double>();
        if (j.contains("lambda_i")) cfg.network.lambda_i = j.at("lambda_i").get<double>();
        if (j.contains("fading")) {
            std::string f = j.at("fading").get<std::string>();
            if (f == "rayleigh")
                cfg.network.fading.kind = FadingKind::rayleigh_amplitude;
            else if (f == "constant")
                cfg.network.fading.kind = FadingKind::constant_unit;
            else
                throw ConfigError("config: fading must be 'rayleigh' or 'constant'");
        }
        if (j.contains("m_amplitude")) cfg.network.m_amplitude = j.at("m_amplitude").get<double>();
        if (j.contains("w_amplitude"))
            cfg.network.w_emission.amplitude = j.at("w_amplitude").get<double>();
        if (j.contains("local_error"))
            cfg.network.p_local_error = j.at("local_error").get<double>();
        if (j.contains("n_draws")) cfg.n_draws = j.at("n_draws").get<std::uint64_t>();
        if (j.contains("t_min")) cfg.t_min = j.at("t_min").get<double>();
        if (j.contains("t_max")) cfg.t_max = j.at("t_max").get<double>();
        if (j.contains("t_count")) cfg.t_count = j.at("t_count").get<int>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("cf_bias_tol")) cfg.cf_bias_tol = j.at("cf_bias_tol").get<double>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }
    if (cfg.network.p_local_error > 0.0) {
        try {
            cfg.network = apply_local_error(cfg.network);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
    return cfg;
}

// NetworkConfig::check reports through invalid_argument; fold that into the
// config-error exit path.
template <typename Cfg>
void validate(const Cfg& cfg) {
    try {
        cfg.check();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

json cf_echo(const CfValidationConfig& c) {
    return {{"delta", c.network.delta},
            {"lambda_d", c.network.lambda_d},
            {"lambda_i", c.network.lambda_i},
            {"fading", c.network.fading.kind == FadingKind::rayleigh_amplitude ? "rayleigh"
                                                                               : "constant"},
            {"m_amplitude", c.network.m_amplitude},
            {"w_amplitude", c.network.w_emission.amplitude},
            {"n_draws", c.n_draws},
            {"t_min", c.t_min},
            {"t_max", c.t_max},
            {"t_count", c.t_count},
            {"seed", c.seed},
            {"cf_bias_tol", c.cf_bias_tol},
            {"threads", c.threads}};
}

struct PSenseOptions {
    double alpha = 0.5;
    double snr_db = 4.0;
    std::size_t l = 10;
    int grid = 40;
};

PSenseOptions psense_from_json(const json& j) {
    require_keys(j, "config", {"alpha", "delta", "snr_db", "L", "p_grid_count"});
    PSenseOptions o;
    try {
        o.alpha = alpha_from(j);
        if (j.contains("snr_db")) o.snr_db = j.at("snr_db").get<double>();
        if (j.contains("L")) o.l = j.at("L").get<std::size_t>();
        if (j.contains("p_grid_count")) o.grid = j.at("p_grid_count").get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }
    return o;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

void emit(const std::string& out_path, const std::string& csv, const std::string& command,
          const json& effective_config, std::uint64_t seed, int threads, double wall_s,
          const std::vector<std::string>& notes) {
    for (const auto& n : notes) std::cerr << "note: " << n << "\n";
    if (out_path.empty()) {
        std::cout << csv;
        return;
    }
    write_file(out_path, csv);
    json manifest{{"command", command},
                  {"config", effective_config},
                  {"seed", seed},
                  {"threads", threads},
                  {"output", out_path},
                  {"wall_time_s", wall_s},
                  {"versions", {{"library", "0.1.0"}, {"compiler", __VERSION__}}},
                  {"notes", notes}};
    write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--out", out_path, "output CSV path (stdout when omitted)");
        auto* s = cmd->add_option("--seed", "override the config seed");
        s->check(CLI::NonNegativeNumber);
        s->each([this](const std::string& v) { seed = std::stoull(v); });
        auto* t = cmd->add_option("--threads", "worker threads");
        t->check(CLI::PositiveNumber);
        t->each([this](const std::string& v) { threads = std::stoi(v); });
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo harness for skewed-stable signal detection"};
    app.require_subcommand(1);
    CommonArgs ber, est, cf, ps;
    CLI::App* cmd_ber = app.add_subcommand("ber-sweep", "error-rate sweep with exact parameters");
    CLI::App* cmd_est =
        app.add_subcommand("estimated-sweep", "error-rate sweep with estimated parameters");
    CLI::App* cmd_cf =
        app.add_subcommand("cf-validate", "aggregate characteristic-function validation");
    CLI::App* cmd_ps = app.add_subcommand("p-sensitivity", "theoretical Pe against exponent p");
    ber.attach(cmd_ber);
    est.attach(cmd_est);
    cf.attach(cmd_cf);
    ps.attach(cmd_ps);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto t0 = std::chrono::steady_clock::now();
    auto wall = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    try {
        if (app.got_subcommand(cmd_ber) || app.got_subcommand(cmd_est)) {
            bool estimated = app.got_subcommand(cmd_est);
            CommonArgs& args = estimated ? est : ber;
            SweepConfig cfg;
            if (!args.config_path.empty()) {
                cfg = sweep_from_json(load_config(args.config_path));
            } else {
                cfg.snr_grid = {0.0, 2.0, 4.0, 6.0, 8.0};
                cfg.n_trials = 2000;
            }
            if (estimated && !cfg.estimation) cfg.estimation = EstimationSettings{};
            if (args.seed) cfg.seed = *args.seed;
            if (args.threads) cfg.threads = *args.threads;
            if (args.out_path.empty()) args.out_path = cfg.output_path;
            validate(cfg);

            BerCurve curve;
            try {
                curve = estimated ? run_estimated_param_sweep(cfg) : run_ber_sweep(cfg);
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                std::cerr << "numerical failure: " << e.what() << "\n";
                return 3;
            }
            emit(args.out_path, to_csv(curve),
                 estimated ? "estimated-sweep" : "ber-sweep", sweep_echo(cfg), cfg.seed,
                 cfg.threads, wall(), curve.notes);
            return 0;
        }

        if (app.got_subcommand(cmd_cf)) {
            CfValidationConfig cfg;
            if (!cf.config_path.empty())
                cfg = cf_from_json(load_config(cf.config_path));
            else {
                cfg.network.lambda_d = 0.3;
                cfg.network.lambda_i = 0.3;
                cfg.n_draws = 20000;
            }
            if (cf.seed) cfg.seed = *cf.seed;
            if (cf.threads) cfg.threads = *cf.threads;
            validate(cfg);

            CfReport report;
            try {
                report = run_cf_validation(cfg);
            } catch (const std::exception& e) {
                std::cerr << "numerical failure: " << e.what() << "\n";
                return 3;
            }
            emit(cf.out_path, to_csv(report), "cf-validate", cf_echo(cfg), cfg.seed,
                 cfg.threads, wall(), report.notes);
            bool all_pass = true;
            for (const auto& r : report.rows) all_pass = all_pass && r.pass;
            if (!all_pass) {
                std::cerr << "characteristic-function mismatch beyond the sampling bound\n";
                return 3;
            }
            return 0;
        }

        // p-sensitivity
        PSenseOptions o;
        if (!ps.config_path.empty()) o = psense_from_json(load_config(ps.config_path));
        std::vector<PSensitivityRow> rows;
        try {
            rows = run_p_sensitivity(o.alpha, o.snr_db, o.l, o.grid);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            std::cerr << "numerical failure: " << e.what() << "\n";
            return 3;
        }
        json echo{{"alpha", o.alpha}, {"snr_db", o.snr_db}, {"L", o.l},
                  {"p_grid_count", o.grid}};
        emit(ps.out_path, to_csv(rows), "p-sensitivity", echo, 0, 1, wall(), {});
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
