#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fhawkes/indeptest.hpp"
#include "fhawkes/whittle.hpp"

namespace fhawkes {

/// Sum_j |theta_hat_j - theta0_j| / |theta0_j|; throws DataError on a zero
/// true component.
double relative_error(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& theta0);

double median(std::vector<double> values);
/// Q3 - Q1 with linearly interpolated quantiles.
double interquartile_range(std::vector<double> values);

/// Runs fn(0..n-1) on `threads` workers. Deterministic output is the
/// caller's duty: write results into slot i only.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

struct ExperimentPreset {
    std::string name;
    std::shared_ptr<const Parameterization> par;
    Eigen::VectorXd theta0;   // true value, constrained scale
    HawkesModel model;
    double default_T = 1250.0;
    MTRule mt_rule = MTRule::TLogT;
    int replications = 200;
};

/// FH1..FH4: univariate heavy-tailed kernels, beta = 0.4/0.5/0.6/0.9.
/// FH5: the 14-parameter bivariate family. Throws ConfigError otherwise;
/// the FH6 family is built by fh6_preset(a, b).
ExperimentPreset make_preset(const std::string& name);

HawkesModel fh6_model(double a, double b);
ExperimentPreset fh6_preset(double a, double b);
/// Closed-form cross-spectrum at frequency zero of the FH6 family:
/// (ab/2 + (a+b)/8) / (1/4 - ab)^3.
double fh6_f12_zero(double a, double b);

struct ReplicationOutcome {
    bool ok = false;
    double value = 0.0;    // relative error, or 1/0 rejection indicator
    double seconds = 0.0;
    std::string error;
};

/// One row of a summary table.
struct SummaryRow {
    std::string preset;
    std::string estimator;
    double T = 0.0;
    std::string mt_rule;
    int replications = 0;
    int failures = 0;
    double median_value = 0.0;
    double iqr = 0.0;
    double median_seconds = 0.0;
};

/// Simulate `reps` logs from the preset model and fit each with the given
/// estimator ("whittle" or "mle"). Replication r uses the substream derived
/// from (base_seed, r); presets follow a fixed-initial policy (restarts=1,
/// family default initial) unless opts overrides it.
std::vector<ReplicationOutcome> run_fit_replications(const ExperimentPreset& preset,
                                                     const std::string& estimator, double T,
                                                     MTRule mt_rule, int reps,
                                                     std::uint64_t base_seed, int threads,
                                                     const FitOptions* opts = nullptr);

SummaryRow summarize(const ExperimentPreset& preset, const std::string& estimator, double T,
                     MTRule mt_rule, const std::vector<ReplicationOutcome>& outcomes);

/// Rejection rate of the independence test on FH6(a, b) data at level alpha.
struct RejectionResult {
    double a = 0.0, b = 0.0;
    int replications = 0;
    int failures = 0;
    int rejections = 0;
    double rate = 0.0;
};

RejectionResult run_rejection_experiment(double a, double b, double T, int reps,
                                         std::uint64_t base_seed, int threads, double alpha,
                                         MTRule mt_rule = MTRule::TenSqrtT);

/// Deterministic table (no wall times; re-runs are byte-identical).
std::string format_summary_table(const std::vector<SummaryRow>& rows);
/// Wall-time medians, written to a sidecar (not expected to reproduce).
std::string format_timing_table(const std::vector<SummaryRow>& rows);
std::string format_rejection_table(const std::vector<RejectionResult>& cells);

}  // namespace fhawkes
