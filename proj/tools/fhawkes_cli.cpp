#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fhawkes/harness.hpp"
#include "fhawkes/io.hpp"

namespace {

using nlohmann::json;

Eigen::VectorXd parse_vector(const std::string& csv) {
    Eigen::VectorXd out;
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stod(item));
    }
    out = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<long>(values.size()));
    return out;
}

std::string format_vector(const Eigen::VectorXd& v) {
    std::string out;
    char buf[48];
    for (int k = 0; k < v.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.12g", v(k));
        if (k) out += ",";
        out += buf;
    }
    return out;
}

// Resolve the model named by a config: preset FH1..FH5, FH6 with (a, b), or
// an explicit family with a constrained theta vector.
fhawkes::HawkesModel model_from_config(const json& cfg) {
    const std::string preset = cfg.value("preset", "");
    if (preset == "FH6") return fhawkes::fh6_model(cfg.at("a").get<double>(), cfg.at("b").get<double>());
    if (!preset.empty()) return fhawkes::make_preset(preset).model;
    const auto par = fhawkes::make_parameterization(cfg.at("family").get<std::string>());
    return par->model(parse_vector(cfg.at("theta").get<std::string>()));
}

void run_simulate(const json& cfg, const std::string& out_path) {
    const fhawkes::HawkesModel model = model_from_config(cfg);
    fhawkes::SimConfig sim;
    sim.T = cfg.at("T").get<double>();
    sim.seed = cfg.at("seed").get<std::uint64_t>();
    sim.burn_in = cfg.value("burn_in", -1.0);
    const fhawkes::EventLog log = fhawkes::simulate_hawkes(model, sim);
    fhawkes::write_events_csv(out_path, log);
}

fhawkes::EventLog load_events(const json& cfg) {
    double T = cfg.value("T", 0.0);
    const std::string events = cfg.at("events").get<std::string>();
    if (!(T > 0.0) && cfg.contains("events_manifest")) {
        const json m = fhawkes::read_manifest(cfg.at("events_manifest").get<std::string>());
        T = m.at("config").at("T").get<double>();
    }
    return fhawkes::read_events_csv(events, T, cfg.value("dim", 0));
}

void run_fit(const json& cfg, const std::string& out_path) {
    const fhawkes::EventLog log = load_events(cfg);
    const auto par = fhawkes::make_parameterization(cfg.at("family").get<std::string>());
    fhawkes::FitOptions opts;
    opts.mt_rule = fhawkes::parse_mt_rule(cfg.value("mt_rule", "tlogt"));
    opts.mt_fixed = cfg.value("mt", 0);
    opts.restarts = cfg.value("restarts", 3);
    opts.seed = cfg.value("seed", 20240915ULL);
    if (cfg.contains("initial")) opts.initial = parse_vector(cfg.at("initial").get<std::string>());
    const std::string method = cfg.value("method", "whittle");
    fhawkes::FitResult fit;
    if (method == "whittle") {
        fit = fhawkes::whittle_fit(log, *par, opts);
    } else if (method == "mle") {
        fit = fhawkes::mle_fit(log, *par, opts);
    } else {
        throw fhawkes::ConfigError("method must be 'whittle' or 'mle'");
    }
    std::ostringstream record;
    record << "family=" << par->family() << "\n"
           << "method=" << method << "\n"
           << "theta_hat=" << format_vector(fit.theta_hat) << "\n"
           << "theta_unconstrained=" << format_vector(par->to_unconstrained(fit.theta_hat)) << "\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "objective=%.12g\n", fit.objective);
    record << buf << "iterations=" << fit.iterations << "\n"
           << "converged=" << (fit.converged ? 1 : 0) << "\n"
           << "restart_index=" << fit.restart_index << "\n";
    fhawkes::write_text_file(out_path, record.str());
}

void run_test_independence(const json& cfg, const std::string& out_path) {
    const fhawkes::EventLog log = load_events(cfg);
    if (log.dim < 2) throw fhawkes::DataError("need D >= 2 marks for the independence test");
    const auto kernel = fhawkes::make_weight_kernel(cfg.value("kernel", "flat"));
    const fhawkes::IndependenceReport report = fhawkes::run_independence_test(
        log, fhawkes::parse_mt_rule(cfg.value("mt_rule", "10sqrt")), cfg.value("mt", 0), kernel);
    std::ostringstream record;
    record << "kernel=" << report.kernel_name << "\n"
           << "M_T=" << report.M_T << "\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "delta_T=%.12g\nc_K=%.12g\nstatistic=%.12g\n", report.delta_T,
                  report.c_K, report.statistic);
    record << buf << "df=" << report.df << "\n";
    std::snprintf(buf, sizeof(buf), "p_value=%.12g\n", report.p_value);
    record << buf;
    for (int i = 0; i < report.phi_hat.rows(); ++i) {
        for (int j = 0; j < report.phi_hat.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "phi_%d_%d=%.12g\n", i + 1, j + 1, report.phi_hat(i, j));
            record << buf;
        }
    }
    fhawkes::write_text_file(out_path, record.str());
}

void run_experiment(const json& cfg, const std::string& out_path, int threads) {
    const std::string preset_name = cfg.at("preset").get<std::string>();
    const int reps = cfg.value("reps", 200);
    const std::uint64_t seed = cfg.value("seed", 1ULL);

    if (preset_name == "FH6") {
        std::vector<double> grid;
        for (const auto& g : cfg.at("grid")) grid.push_back(g.get<double>());
        const double T = cfg.value("T", 5000.0);
        const double alpha = cfg.value("alpha", 0.05);
        std::vector<fhawkes::RejectionResult> cells;
        int total_failures = 0;
        std::uint64_t cell = 0;
        for (double a : grid) {
            for (double b : grid) {
                cells.push_back(fhawkes::run_rejection_experiment(
                    a, b, T, reps, fhawkes::Rng::mix(seed, 1000 + cell++), threads, alpha));
                total_failures += cells.back().failures;
            }
        }
        fhawkes::write_text_file(out_path, fhawkes::format_rejection_table(cells));
        if (total_failures * 10 > reps * static_cast<int>(cells.size())) {
            throw fhawkes::NumericalError("more than 10% of replications failed");
        }
        return;
    }

    fhawkes::ExperimentPreset preset = fhawkes::make_preset(preset_name);
    std::vector<double> horizons;
    if (cfg.contains("T")) {
        if (cfg.at("T").is_array()) {
            for (const auto& t : cfg.at("T")) horizons.push_back(t.get<double>());
        } else {
            horizons.push_back(cfg.at("T").get<double>());
        }
    } else {
        horizons.push_back(preset.default_T);
    }
    std::vector<std::string> estimators;
    const std::string est = cfg.value("estimator", "whittle");
    if (est == "both") {
        estimators = {"whittle", "mle"};
    } else {
        estimators = {est};
    }
    std::vector<std::string> rules;
    if (cfg.contains("mt_rule")) {
        if (cfg.at("mt_rule").is_array()) {
            for (const auto& r : cfg.at("mt_rule")) rules.push_back(r.get<std::string>());
        } else {
            rules.push_back(cfg.at("mt_rule").get<std::string>());
        }
    } else {
        rules.push_back(fhawkes::mt_rule_name(preset.mt_rule));
    }

    std::vector<fhawkes::SummaryRow> rows;
    int total = 0, failures = 0;
    std::uint64_t cell = 0;
    for (const std::string& estimator : estimators) {
        for (double T : horizons) {
            for (const std::string& rule : rules) {
                const auto outcomes = fhawkes::run_fit_replications(
                    preset, estimator, T, fhawkes::parse_mt_rule(rule), reps,
                    fhawkes::Rng::mix(seed, 2000 + cell++), threads);
                rows.push_back(fhawkes::summarize(preset, estimator, T,
                                                  fhawkes::parse_mt_rule(rule), outcomes));
                total += reps;
                failures += rows.back().failures;
            }
        }
    }
    fhawkes::write_text_file(out_path, fhawkes::format_summary_table(rows));
    fhawkes::write_text_file(out_path + ".timing", fhawkes::format_timing_table(rows));
    if (failures * 10 > total) throw fhawkes::NumericalError("more than 10% of replications failed");
}

void run_spectrum(const json& cfg, const std::string& out_path) {
    const fhawkes::HawkesModel model = model_from_config(cfg);
    const double lo = cfg.value("omega_min", 0.0);
    const double hi = cfg.value("omega_max", 10.0);
    const int count = cfg.value("count", 101);
    if (count < 1 || !(hi >= lo)) throw fhawkes::ConfigError("invalid frequency grid");
    std::ostringstream out;
    out << "omega,i,j,re,im\n";
    char buf[160];
    for (int k = 0; k < count; ++k) {
        const double omega = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
        const fhawkes::SpectralMatrix f = fhawkes::bartlett_spectral_matrix(model, omega);
        for (int i = 0; i < f.values.rows(); ++i) {
            for (int j = 0; j < f.values.cols(); ++j) {
                std::snprintf(buf, sizeof(buf), "%.10g,%d,%d,%.10g,%.10g\n", omega, i + 1, j + 1,
                              f.values(i, j).real(), f.values(i, j).imag());
                out << buf;
            }
        }
    }
    fhawkes::write_text_file(out_path, out.str());
}

void dispatch(const json& manifest, const std::string& out_path, int threads) {
    const std::string command = manifest.at("command").get<std::string>();
    const json& cfg = manifest.at("config");
    if (command == "simulate") {
        run_simulate(cfg, out_path);
    } else if (command == "fit") {
        run_fit(cfg, out_path);
    } else if (command == "test-independence") {
        run_test_independence(cfg, out_path);
    } else if (command == "experiment") {
        run_experiment(cfg, out_path, threads);
    } else if (command == "spectrum") {
        run_spectrum(cfg, out_path);
    } else {
        throw fhawkes::ConfigError("unknown command in manifest: " + command);
    }
}

void emit_manifest(const std::string& command, const json& cfg, const std::string& out_path,
                   std::uint64_t seed) {
    json manifest;
    manifest["command"] = command;
    manifest["config"] = cfg;
    manifest["base_seed"] = seed;
    manifest["out"] = out_path;
    manifest["version"] = "1";
    fhawkes::write_manifest(out_path + ".manifest.json", manifest);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hawkes process simulation and frequency-domain inference toolkit"};
    app.require_subcommand(1);

    int threads = 1;
    app.add_option("--threads", threads, "replication worker count")->capture_default_str();

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "simulate a Hawkes event log");
    std::string sim_preset, sim_family, sim_theta, sim_out;
    double sim_a = 0.0, sim_b = 0.0, sim_T = 1000.0, sim_burn_in = -1.0;
    std::uint64_t sim_seed = 1;
    sim->add_option("--preset", sim_preset, "FH1..FH5 or FH6");
    sim->add_option("--a", sim_a, "FH6 cross weight a");
    sim->add_option("--b", sim_b, "FH6 cross weight b");
    sim->add_option("--family", sim_family, "parameter family name");
    sim->add_option("--theta", sim_theta, "comma-separated constrained parameters");
    sim->add_option("--T", sim_T, "horizon")->capture_default_str();
    sim->add_option("--burn-in", sim_burn_in, "immigrant window before 0 (default: T)");
    sim->add_option("--seed", sim_seed, "simulation seed")->capture_default_str();
    sim->add_option("--out", sim_out, "output CSV path")->required();

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "fit a parametric family to an event log");
    std::string fit_events, fit_family, fit_method = "whittle", fit_rule = "tlogt", fit_out;
    std::string fit_initial, fit_events_manifest;
    double fit_T = 0.0;
    int fit_mt = 0, fit_restarts = 3, fit_dim = 0;
    std::uint64_t fit_seed = 20240915ULL;
    fit->add_option("--events", fit_events, "event CSV path")->required();
    fit->add_option("--T", fit_T, "horizon (required unless --events-manifest)");
    fit->add_option("--events-manifest", fit_events_manifest, "manifest carrying the horizon");
    fit->add_option("--dim", fit_dim, "number of marks (default: inferred)");
    fit->add_option("--family", fit_family, "parameter family")->required();
    fit->add_option("--method", fit_method, "whittle | mle")->capture_default_str();
    fit->add_option("--mt-rule", fit_rule, "fixed | 2t | tlogt | 10sqrt")->capture_default_str();
    fit->add_option("--mt", fit_mt, "frequency count for --mt-rule fixed");
    fit->add_option("--restarts", fit_restarts, "optimizer restarts")->capture_default_str();
    fit->add_option("--init", fit_initial, "comma-separated initial constrained parameters");
    fit->add_option("--seed", fit_seed, "restart jitter seed")->capture_default_str();
    fit->add_option("--out", fit_out, "result record path")->required();

    // ---- test-independence ----
    auto* ti = app.add_subcommand("test-independence", "frequency-zero independence test");
    std::string ti_events, ti_kernel = "flat", ti_rule = "10sqrt", ti_out, ti_events_manifest;
    double ti_T = 0.0;
    int ti_mt = 0, ti_dim = 0;
    ti->add_option("--events", ti_events, "event CSV path")->required();
    ti->add_option("--T", ti_T, "horizon");
    ti->add_option("--events-manifest", ti_events_manifest, "manifest carrying the horizon");
    ti->add_option("--dim", ti_dim, "number of marks (default: inferred)");
    ti->add_option("--mt-rule", ti_rule, "fixed | 2t | tlogt | 10sqrt")->capture_default_str();
    ti->add_option("--mt", ti_mt, "frequency count for --mt-rule fixed");
    ti->add_option("--kernel", ti_kernel, "flat | epanechnikov")->capture_default_str();
    ti->add_option("--out", ti_out, "report path")->required();

    // ---- experiment ----
    auto* ex = app.add_subcommand("experiment", "Monte Carlo experiment tables");
    std::string ex_preset, ex_estimator = "whittle", ex_grid, ex_out;
    std::vector<double> ex_T;
    std::vector<std::string> ex_rules;
    int ex_reps = 200;
    double ex_alpha = 0.05;
    std::uint64_t ex_seed = 1;
    ex->add_option("--preset", ex_preset, "FH1..FH5 or FH6")->required();
    ex->add_option("--estimator", ex_estimator, "whittle | mle | both")->capture_default_str();
    ex->add_option("--T", ex_T, "horizons (repeatable)");
    ex->add_option("--mt-rule", ex_rules, "frequency rules (repeatable)");
    ex->add_option("--grid", ex_grid, "FH6 grid of a/b values, comma-separated");
    ex->add_option("--reps", ex_reps, "replications per cell")->capture_default_str();
    ex->add_option("--alpha", ex_alpha, "test level for FH6")->capture_default_str();
    ex->add_option("--seed", ex_seed, "base seed")->capture_default_str();
    ex->add_option("--out", ex_out, "table path")->required();

    // ---- spectrum ----
    auto* sp = app.add_subcommand("spectrum", "tabulate the spectral density matrix");
    std::string sp_preset, sp_family, sp_theta, sp_out;
    double sp_a = 0.0, sp_b = 0.0, sp_lo = 0.0, sp_hi = 10.0;
    int sp_count = 101;
    sp->add_option("--preset", sp_preset, "FH1..FH5 or FH6");
    sp->add_option("--a", sp_a, "FH6 cross weight a");
    sp->add_option("--b", sp_b, "FH6 cross weight b");
    sp->add_option("--family", sp_family, "parameter family name");
    sp->add_option("--theta", sp_theta, "comma-separated constrained parameters");
    sp->add_option("--omega-min", sp_lo, "grid start")->capture_default_str();
    sp->add_option("--omega-max", sp_hi, "grid end")->capture_default_str();
    sp->add_option("--count", sp_count, "grid size")->capture_default_str();
    sp->add_option("--out", sp_out, "CSV path")->required();

    // ---- replay ----
    auto* rp = app.add_subcommand("replay", "re-run a command from its manifest");
    std::string rp_manifest, rp_out;
    rp->add_option("--manifest", rp_manifest, "manifest path")->required();
    rp->add_option("--out", rp_out, "override output path (default: manifest's)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            json cfg;
            if (!sim_preset.empty()) cfg["preset"] = sim_preset;
            if (sim_preset == "FH6") {
                cfg["a"] = sim_a;
                cfg["b"] = sim_b;
            }
            if (!sim_family.empty()) cfg["family"] = sim_family;
            if (!sim_theta.empty()) cfg["theta"] = sim_theta;
            cfg["T"] = sim_T;
            cfg["seed"] = sim_seed;
            cfg["burn_in"] = sim_burn_in;
            run_simulate(cfg, sim_out);
            emit_manifest("simulate", cfg, sim_out, sim_seed);
        } else if (fit->parsed()) {
            json cfg;
            cfg["events"] = fit_events;
            if (fit_T > 0.0) cfg["T"] = fit_T;
            if (!fit_events_manifest.empty()) cfg["events_manifest"] = fit_events_manifest;
            if (fit_dim > 0) cfg["dim"] = fit_dim;
            cfg["family"] = fit_family;
            cfg["method"] = fit_method;
            cfg["mt_rule"] = fit_rule;
            if (fit_mt > 0) cfg["mt"] = fit_mt;
            cfg["restarts"] = fit_restarts;
            if (!fit_initial.empty()) cfg["initial"] = fit_initial;
            cfg["seed"] = fit_seed;
            run_fit(cfg, fit_out);
            emit_manifest("fit", cfg, fit_out, fit_seed);
        } else if (ti->parsed()) {
            json cfg;
            cfg["events"] = ti_events;
            if (ti_T > 0.0) cfg["T"] = ti_T;
            if (!ti_events_manifest.empty()) cfg["events_manifest"] = ti_events_manifest;
            if (ti_dim > 0) cfg["dim"] = ti_dim;
            cfg["mt_rule"] = ti_rule;
            if (ti_mt > 0) cfg["mt"] = ti_mt;
            cfg["kernel"] = ti_kernel;
            run_test_independence(cfg, ti_out);
            emit_manifest("test-independence", cfg, ti_out, 0);
        } else if (ex->parsed()) {
            json cfg;
            cfg["preset"] = ex_preset;
            cfg["estimator"] = ex_estimator;
            if (!ex_T.empty()) cfg["T"] = ex_T.size() == 1 ? json(ex_T[0]) : json(ex_T);
            if (!ex_rules.empty()) {
                cfg["mt_rule"] = ex_rules.size() == 1 ? json(ex_rules[0]) : json(ex_rules);
            }
            if (!ex_grid.empty()) {
                const Eigen::VectorXd g = parse_vector(ex_grid);
                json arr = json::array();
                for (int k = 0; k < g.size(); ++k) arr.push_back(g(k));
                cfg["grid"] = arr;
            }
            cfg["reps"] = ex_reps;
            cfg["alpha"] = ex_alpha;
            cfg["seed"] = ex_seed;
            run_experiment(cfg, ex_out, threads);
            emit_manifest("experiment", cfg, ex_out, ex_seed);
        } else if (sp->parsed()) {
            json cfg;
            if (!sp_preset.empty()) cfg["preset"] = sp_preset;
            if (sp_preset == "FH6") {
                cfg["a"] = sp_a;
                cfg["b"] = sp_b;
            }
            if (!sp_family.empty()) cfg["family"] = sp_family;
            if (!sp_theta.empty()) cfg["theta"] = sp_theta;
            cfg["omega_min"] = sp_lo;
            cfg["omega_max"] = sp_hi;
            cfg["count"] = sp_count;
            run_spectrum(cfg, sp_out);
            emit_manifest("spectrum", cfg, sp_out, 0);
        } else if (rp->parsed()) {
            const json manifest = fhawkes::read_manifest(rp_manifest);
            const std::string out_path =
                rp_out.empty() ? manifest.at("out").get<std::string>() : rp_out;
            dispatch(manifest, out_path, threads);
        }
    } catch (const fhawkes::EventParseError& e) {
        std::cerr << "error: line " << e.line << ": " << e.what() << "\n";
        return 3;
    } catch (const fhawkes::NonstationaryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fhawkes::DataError& e) {
        const std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        return msg.find("need D >= 2") != std::string::npos ? 4 : 2;
    } catch (const fhawkes::NumericalError& e) {
        const std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        return msg.find("replications failed") != std::string::npos ? 5 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
