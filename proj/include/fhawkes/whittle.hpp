#pragma once

#include <cstdint>
#include <string>

#include "fhawkes/model.hpp"
#include "fhawkes/optim.hpp"
#include "fhawkes/spectral.hpp"

namespace fhawkes {

enum class MTRule { Fixed, TwoT, TLogT, TenSqrtT };

MTRule parse_mt_rule(const std::string& name);  // "fixed", "2t", "tlogt", "10sqrt"
std::string mt_rule_name(MTRule rule);
int resolve_mt(MTRule rule, int fixed, double T);

struct FitOptions {
    MTRule mt_rule = MTRule::TLogT;
    int mt_fixed = 0;                 // used when mt_rule == Fixed
    Eigen::VectorXd initial;          // constrained scale; empty = family default
    int max_iter = 0;                 // 0 = 2000 * d
    double x_tol = 1e-6;
    double f_tol = 1e-9;
    int restarts = 3;                 // first start is the initial value, rest jittered
    double jitter = 0.1;              // multiplicative jitter on the constrained scale
    std::uint64_t seed = 20240915;    // restart jitter stream
};

struct FitResult {
    Eigen::VectorXd theta_hat;  // constrained scale
    double objective = 0.0;
    int iterations = 0;         // total objective evaluations across restarts
    bool converged = false;
    int restart_index = 0;
};

/// Whittle objective: (1/T) sum_p [J^H Psi^{-1} J + log det Psi](omega_p)
/// plus the family's stationarity barrier. Psi never needs an explicit
/// inverse: with A = I - nu (.*) Ghat, Psi^{-1} = A^H Diag(lambda)^{-1} A, so
/// the quadratic form is sum_i |(A J)_i|^2 / lambda_i and
/// log det Psi = sum_i log lambda_i - 2 log |det A|.
double whittle_negloglik(const FourierFrame& frame, const Parameterization& par,
                         const Eigen::VectorXd& theta);

/// Population counterpart on the band [0, 2 pi L]:
/// (1/2pi) int [log det Psi_theta + tr(f2 Psi_theta^{-1})] dx, where f2 is
/// the spectral density of m_true. Minimized exactly when Psi_theta = f2.
double population_contrast(const HawkesModel& m_true, const Parameterization& par,
                           const Eigen::VectorXd& theta, double L);

FitResult whittle_fit(const EventLog& log, const Parameterization& par, const FitOptions& opts);

/// Exact negative log-likelihood:
/// -sum_k log lambda_{mark_k}(t_k | past) + sum_i int_0^T lambda_i(t) dt.
/// All-exponential kernel matrices use an O(n) recursion; otherwise a
/// generic O(n^2) evaluation with per-kernel interpolation tables is used
/// (set use_tables = false to force direct special-function evaluation).
double hawkes_mle_negloglik(const EventLog& log, const HawkesModel& m, bool use_tables = true);

FitResult mle_fit(const EventLog& log, const Parameterization& par, const FitOptions& opts);

/// Parametric bootstrap covariance of sqrt(T) (theta* - theta_hat):
/// simulate `reps` logs from the fitted model, refit each, return the sample
/// covariance. Throws NumericalError if more than 20% of refits fail.
Eigen::MatrixXd fit_covariance_bootstrap(const Parameterization& par,
                                         const Eigen::VectorXd& theta_hat, double T,
                                         const FitOptions& opts, int reps,
                                         std::uint64_t seed, bool use_mle = false);

}  // namespace fhawkes
