#include "fhawkes/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

namespace fhawkes {

double relative_error(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& theta0) {
    if (theta_hat.size() != theta0.size()) throw DataError("parameter vectors differ in length");
    double total = 0.0;
    for (int k = 0; k < theta0.size(); ++k) {
        if (theta0(k) == 0.0) throw DataError("relative error undefined for a zero true component");
        total += std::abs(theta_hat(k) - theta0(k)) / std::abs(theta0(k));
    }
    return total;
}

namespace {

// type-7 (linear interpolation) quantile of a sorted sample
double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw DataError("quantile of an empty sample");
    const double pos = q * (sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - lo;
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, 0.5);
}

double interquartile_range(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, 0.75) - quantile_sorted(values, 0.25);
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

ExperimentPreset make_preset(const std::string& name) {
    ExperimentPreset preset;
    preset.name = name;
    if (name == "FH1" || name == "FH2" || name == "FH3" || name == "FH4") {
        const double betas[4] = {0.4, 0.5, 0.6, 0.9};
        const double beta = betas[name[2] - '1'];
        preset.par = make_parameterization("univariate-ML");
        preset.theta0 = Eigen::VectorXd(4);
        preset.theta0 << 1.0, 0.5, beta, 1.0;
        preset.model = preset.par->model(preset.theta0);
        preset.default_T = 1250.0;
        preset.mt_rule = MTRule::TLogT;
        preset.replications = 200;
        return preset;
    }
    if (name == "FH5") {
        preset.par = make_parameterization("bivariate-ML");
        HawkesModel m;
        m.mu = Eigen::VectorXd(2);
        m.mu << 0.2, 0.1;
        m.nu = Eigen::MatrixXd(2, 2);
        m.nu << 0.3, 1.0, 0.5, 0.2;
        m.kernels = {{KernelSpec::mittag_leffler(0.75, 0.8), KernelSpec::mittag_leffler(0.85, 1.0)},
                     {KernelSpec::mittag_leffler(0.8, 0.9), KernelSpec::mittag_leffler(0.9, 1.1)}};
        m.validate();
        preset.model = m;
        const Eigen::VectorXd lambda = average_intensity(m);
        Eigen::VectorXd theta(14);
        theta << 1.0 / lambda(0), 1.0 / lambda(1),
            m.nu(0, 0), m.nu(1, 0), m.nu(0, 1), m.nu(1, 1),
            0.75, 0.8, 0.85, 0.9,
            0.8, 0.9, 1.0, 1.1;
        preset.theta0 = theta;
        preset.default_T = 1250.0;
        preset.mt_rule = MTRule::TLogT;
        preset.replications = 200;
        return preset;
    }
    throw ConfigError("unknown preset: " + name + " (FH6 needs explicit a and b)");
}

HawkesModel fh6_model(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0)) throw ConfigError("FH6 weights must be nonnegative");
    const auto par = make_parameterization("bivariate-ML-symmetric-FH6");
    Eigen::VectorXd theta(2);
    theta << a, b;
    return par->model(theta);
}

ExperimentPreset fh6_preset(double a, double b) {
    ExperimentPreset preset;
    preset.name = "FH6";
    preset.par = make_parameterization("bivariate-ML-symmetric-FH6");
    preset.theta0 = Eigen::VectorXd(2);
    preset.theta0 << a, b;
    preset.model = fh6_model(a, b);
    preset.default_T = 5000.0;
    preset.mt_rule = MTRule::TenSqrtT;
    preset.replications = 200;
    return preset;
}

double fh6_f12_zero(double a, double b) {
    const double denom = 0.25 - a * b;
    if (!(denom > 0.0)) throw NonstationaryError("nonstationary FH6 model: ab >= 1/4");
    return (a * b / 2.0 + (a + b) / 8.0) / (denom * denom * denom);
}

std::vector<ReplicationOutcome> run_fit_replications(const ExperimentPreset& preset,
                                                     const std::string& estimator, double T,
                                                     MTRule mt_rule, int reps,
                                                     std::uint64_t base_seed, int threads,
                                                     const FitOptions* opts) {
    if (estimator != "whittle" && estimator != "mle") {
        throw ConfigError("estimator must be 'whittle' or 'mle'");
    }
    FitOptions fit_opts;
    if (opts) fit_opts = *opts;
    fit_opts.mt_rule = mt_rule;
    if (!opts) {
        fit_opts.restarts = 1;  // fixed initial value across realizations
    }

    std::vector<ReplicationOutcome> outcomes(reps);
    parallel_for(reps, threads, [&](int r) {
        ReplicationOutcome& out = outcomes[r];
        const auto start = std::chrono::steady_clock::now();
        try {
            SimConfig cfg;
            cfg.T = T;
            cfg.seed = Rng::mix(base_seed, static_cast<std::uint64_t>(r));
            const EventLog log = simulate_hawkes(preset.model, cfg);
            const FitResult fit = estimator == "mle" ? mle_fit(log, *preset.par, fit_opts)
                                                     : whittle_fit(log, *preset.par, fit_opts);
            out.value = relative_error(fit.theta_hat, preset.theta0);
            out.ok = true;
        } catch (const std::exception& e) {
            out.error = e.what();
        }
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });
    return outcomes;
}

SummaryRow summarize(const ExperimentPreset& preset, const std::string& estimator, double T,
                     MTRule mt_rule, const std::vector<ReplicationOutcome>& outcomes) {
    SummaryRow row;
    row.preset = preset.name;
    row.estimator = estimator;
    row.T = T;
    row.mt_rule = mt_rule_name(mt_rule);
    row.replications = static_cast<int>(outcomes.size());
    std::vector<double> values, times;
    for (const auto& o : outcomes) {
        if (o.ok) {
            values.push_back(o.value);
            times.push_back(o.seconds);
        } else {
            ++row.failures;
        }
    }
    if (values.empty()) throw DataError("all replications failed");
    row.median_value = median(values);
    row.iqr = interquartile_range(values);
    row.median_seconds = median(times);
    return row;
}

RejectionResult run_rejection_experiment(double a, double b, double T, int reps,
                                         std::uint64_t base_seed, int threads, double alpha,
                                         MTRule mt_rule) {
    const HawkesModel model = fh6_model(a, b);
    RejectionResult result;
    result.a = a;
    result.b = b;
    result.replications = reps;
    std::vector<int> verdicts(reps, -1);  // -1 failure, 0 accept, 1 reject
    parallel_for(reps, threads, [&](int r) {
        try {
            SimConfig cfg;
            cfg.T = T;
            cfg.seed = Rng::mix(base_seed, static_cast<std::uint64_t>(r));
            const EventLog log = simulate_hawkes(model, cfg);
            const IndependenceReport report = run_independence_test(log, mt_rule);
            verdicts[r] = report.p_value < alpha ? 1 : 0;
        } catch (const std::exception&) {
            verdicts[r] = -1;
        }
    });
    int usable = 0;
    for (int v : verdicts) {
        if (v < 0) {
            ++result.failures;
        } else {
            ++usable;
            result.rejections += v;
        }
    }
    if (usable == 0) throw DataError("all replications failed");
    result.rate = static_cast<double>(result.rejections) / usable;
    return result;
}

std::string format_summary_table(const std::vector<SummaryRow>& rows) {
    // deliberately excludes wall times so re-runs are byte-identical;
    // timings go to the sidecar produced by format_timing_table
    std::ostringstream out;
    out << "preset,estimator,T,mt_rule,reps,failures,median_rel_error,iqr\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.0f,%s,%d,%d,%.6f,%.6f\n", r.preset.c_str(),
                      r.estimator.c_str(), r.T, r.mt_rule.c_str(), r.replications, r.failures,
                      r.median_value, r.iqr);
        out << buf;
    }
    return out.str();
}

std::string format_timing_table(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "preset,estimator,T,mt_rule,median_seconds\n";
    char buf[192];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.0f,%s,%.4f\n", r.preset.c_str(),
                      r.estimator.c_str(), r.T, r.mt_rule.c_str(), r.median_seconds);
        out << buf;
    }
    return out.str();
}

std::string format_rejection_table(const std::vector<RejectionResult>& cells) {
    std::ostringstream out;
    out << "a,b,reps,failures,rejections,rate\n";
    char buf[128];
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof(buf), "%.3f,%.3f,%d,%d,%d,%.4f\n", c.a, c.b, c.replications,
                      c.failures, c.rejections, c.rate);
        out << buf;
    }
    return out.str();
}

}  // namespace fhawkes
