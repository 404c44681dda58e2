#include "fhawkes/whittle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "fhawkes/quadrature.hpp"

namespace fhawkes {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Cubic-Hermite (Catmull-Rom) interpolation table on a uniform grid in
// log x. Used to evaluate Mittag-Leffler kernel densities and CDFs inside
// the O(n^2) likelihood loop without re-running series/quadrature per pair.
class MLKernelTable {
public:
    MLKernelTable(const MLParams& p, double x_max, int n_points = 800)
        : p_(p), s_lo_(std::log(1e-9)), s_hi_(std::log(std::max(x_max, 1.0) * 1.05)),
          n_(n_points) {
        step_ = (s_hi_ - s_lo_) / (n_ - 1);
        inv_step_ = 1.0 / step_;
        density_vals_.resize(n_);
        survival_vals_.resize(n_);
        for (int k = 0; k < n_; ++k) {
            const double x = std::exp(s_lo_ + k * step_);
            const double y = std::pow(p_.c * x, p_.beta);
            // tabulating the density itself (not just the special-function
            // factor) keeps pow() out of the O(n^2) lookup loop
            density_vals_[k] = std::pow(p_.c, p_.beta) * std::pow(x, p_.beta - 1.0) *
                               mittag_leffler(p_.beta, p_.beta, -y).real();
            survival_vals_[k] = mittag_leffler(p_.beta, 1.0, -y).real();
        }
    }

    double density(double x) const {
        if (x <= 0.0) return 0.0;
        const double s = std::log(x);
        if (s <= s_lo_) {
            // below the grid: leading-order head, E_{b,b}(0) = 1/Gamma(b)
            return std::pow(p_.c, p_.beta) * std::pow(x, p_.beta - 1.0) / std::tgamma(p_.beta);
        }
        return interp(density_vals_, s);
    }

    double cdf(double x) const {
        if (x <= 0.0) return 0.0;
        const double s = std::log(x);
        if (s <= s_lo_) return std::pow(p_.c * x, p_.beta) / std::tgamma(1.0 + p_.beta);
        return std::clamp(1.0 - interp(survival_vals_, s), 0.0, 1.0);
    }

private:
    double interp(const std::vector<double>& vals, double s) const {
        double pos = (s - s_lo_) * inv_step_;
        if (pos > n_ - 1) pos = n_ - 1;
        int k = static_cast<int>(pos);
        if (k > n_ - 2) k = n_ - 2;
        const double t = pos - k;
        const double y0 = vals[k], y1 = vals[k + 1];
        const double m0 = (k > 0) ? 0.5 * (y1 - vals[k - 1]) : (y1 - y0);
        const double m1 = (k + 2 < n_) ? 0.5 * (vals[k + 2] - y0) : (y1 - y0);
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 +
               (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
    }

    MLParams p_;
    double s_lo_, s_hi_, step_, inv_step_;
    int n_;
    std::vector<double> density_vals_, survival_vals_;
};

bool all_exponential(const HawkesModel& m) {
    for (const auto& row : m.kernels) {
        for (const auto& k : row) {
            if (k.family != KernelFamily::Exponential) return false;
        }
    }
    return true;
}

double mle_exponential_fast(const EventLog& log, const HawkesModel& m) {
    const int d = m.dim();
    // R(i,j) = sum over past mark-j events l of c_ij exp(-c_ij (t - t_l))
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, d);
    double prev_time = 0.0;
    double loglik_events = 0.0;
    for (const Event& e : log.events) {
        const double dt = e.time - prev_time;
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                r(i, j) *= std::exp(-m.kernels[i][j].ml.c * dt);
            }
        }
        const int i = e.mark - 1;
        double intensity = m.mu(i);
        for (int j = 0; j < d; ++j) intensity += m.nu(i, j) * r(i, j);
        if (!(intensity > 0.0)) throw EvaluationError("non-positive conditional intensity");
        loglik_events += std::log(intensity);
        const int j = e.mark - 1;
        for (int i2 = 0; i2 < d; ++i2) r(i2, j) += m.kernels[i2][j].ml.c;
        prev_time = e.time;
    }
    double compensator = m.mu.sum() * log.horizon;
    for (const Event& e : log.events) {
        const int j = e.mark - 1;
        const double rem = log.horizon - e.time;
        for (int i = 0; i < d; ++i) {
            if (m.nu(i, j) != 0.0) compensator += m.nu(i, j) * m.kernels[i][j].cdf(rem);
        }
    }
    return -loglik_events + compensator;
}

double mle_generic(const EventLog& log, const HawkesModel& m, bool use_tables) {
    const int d = m.dim();
    std::vector<std::vector<std::unique_ptr<MLKernelTable>>> tables(d);
    if (use_tables) {
        for (int i = 0; i < d; ++i) {
            tables[i].resize(d);
            for (int j = 0; j < d; ++j) {
                if (m.kernels[i][j].family == KernelFamily::MittagLeffler) {
                    tables[i][j] = std::make_unique<MLKernelTable>(m.kernels[i][j].ml, log.horizon);
                }
            }
        }
    }
    auto density = [&](int i, int j, double x) {
        if (use_tables && tables[i][j]) return tables[i][j]->density(x);
        return m.kernels[i][j].density(x);
    };
    auto cdf = [&](int i, int j, double x) {
        if (use_tables && tables[i][j]) return tables[i][j]->cdf(x);
        return m.kernels[i][j].cdf(x);
    };

    const auto& ev = log.events;
    const std::size_t n = ev.size();
    double loglik_events = 0.0;
    if (d == 1 && use_tables && tables[0][0]) {
        // tight univariate loop: contiguous times, direct table lookups
        const MLKernelTable& table = *tables[0][0];
        const double mu = m.mu(0);
        const double w = m.nu(0, 0);
        std::vector<double> times(n);
        for (std::size_t k = 0; k < n; ++k) times[k] = ev[k].time;
        for (std::size_t k = 0; k < n; ++k) {
            double excitation = 0.0;
            const double tk = times[k];
            for (std::size_t l = 0; l < k; ++l) excitation += table.density(tk - times[l]);
            const double intensity = mu + w * excitation;
            if (!(intensity > 0.0)) throw EvaluationError("non-positive conditional intensity");
            loglik_events += std::log(intensity);
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            const int i = ev[k].mark - 1;
            double intensity = m.mu(i);
            for (std::size_t l = 0; l < k; ++l) {
                const int j = ev[l].mark - 1;
                const double w = m.nu(i, j);
                if (w != 0.0) intensity += w * density(i, j, ev[k].time - ev[l].time);
            }
            if (!(intensity > 0.0)) throw EvaluationError("non-positive conditional intensity");
            loglik_events += std::log(intensity);
        }
    }
    double compensator = m.mu.sum() * log.horizon;
    for (std::size_t k = 0; k < n; ++k) {
        const int j = ev[k].mark - 1;
        const double rem = log.horizon - ev[k].time;
        for (int i = 0; i < d; ++i) {
            if (m.nu(i, j) != 0.0) compensator += m.nu(i, j) * cdf(i, j, rem);
        }
    }
    return -loglik_events + compensator;
}

// Shared driver for whittle_fit / mle_fit: restart loop on the
// unconstrained scale around the configured initial value.
FitResult run_fit(const Parameterization& par, const FitOptions& opts,
                  const std::function<double(const Eigen::VectorXd&)>& constrained_objective) {
    const int d = par.dim();
    Eigen::VectorXd theta0 = opts.initial.size() > 0 ? opts.initial : par.initial();
    if (theta0.size() != d) throw ConfigError("initial value has wrong length");

    NelderMeadOptions nm;
    nm.max_iter = opts.max_iter > 0 ? opts.max_iter : 2000 * d;
    nm.x_tol = opts.x_tol;
    nm.f_tol = opts.f_tol;

    auto objective_u = [&](const Eigen::VectorXd& u) {
        try {
            return constrained_objective(par.to_constrained(u));
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    FitResult best;
    bool have_best = false;
    int total_evals = 0;
    Rng jitter_rng(Rng::mix(opts.seed, 0x7157u));
    const int restarts = std::max(1, opts.restarts);
    for (int r = 0; r < restarts; ++r) {
        Eigen::VectorXd start = theta0;
        if (r > 0) {
            for (int k = 0; k < d; ++k) {
                start(k) *= 1.0 + opts.jitter * (2.0 * jitter_rng.uniform() - 1.0);
            }
        }
        Eigen::VectorXd u0;
        try {
            u0 = par.to_unconstrained(start);
        } catch (const std::exception&) {
            continue;
        }
        NelderMeadResult nm_result = nelder_mead(objective_u, u0, nm);
        total_evals += nm_result.iterations;
        if (!std::isfinite(nm_result.f)) continue;
        if (!have_best || nm_result.f < best.objective) {
            best.theta_hat = par.to_constrained(nm_result.x);
            best.objective = nm_result.f;
            best.converged = nm_result.converged;
            best.restart_index = r;
            have_best = true;
        }
    }
    if (!have_best) throw EvaluationError("all restarts failed to produce a finite objective");
    best.iterations = total_evals;
    return best;
}

}  // namespace

MTRule parse_mt_rule(const std::string& name) {
    if (name == "fixed") return MTRule::Fixed;
    if (name == "2t") return MTRule::TwoT;
    if (name == "tlogt") return MTRule::TLogT;
    if (name == "10sqrt") return MTRule::TenSqrtT;
    throw ConfigError("unknown frequency-count rule: " + name);
}

std::string mt_rule_name(MTRule rule) {
    switch (rule) {
        case MTRule::Fixed: return "fixed";
        case MTRule::TwoT: return "2t";
        case MTRule::TLogT: return "tlogt";
        case MTRule::TenSqrtT: return "10sqrt";
    }
    throw ConfigError("unknown frequency-count rule");
}

int resolve_mt(MTRule rule, int fixed, double T) {
    double m = 0.0;
    switch (rule) {
        case MTRule::Fixed:
            if (fixed < 1) throw ConfigError("fixed frequency count must be positive");
            return fixed;
        case MTRule::TwoT: m = 2.0 * T; break;
        case MTRule::TLogT: m = T * std::log(T); break;
        case MTRule::TenSqrtT: m = 10.0 * std::sqrt(T); break;
    }
    const int out = static_cast<int>(std::floor(m));
    if (out < 3) throw ConfigError("frequency count too small for horizon");
    return out;
}

double whittle_negloglik(const FourierFrame& frame, const Parameterization& par,
                         const Eigen::VectorXd& theta) {
    const SpectralParams sp = par.spectral(theta);
    const int d = sp.dim();
    if (d != frame.dim) throw EvaluationError("family dimension does not match data");
    double sum_log_lambda = 0.0;
    for (int i = 0; i < d; ++i) {
        if (!(sp.lambda(i) > 0.0)) throw EvaluationError("non-positive model intensity");
        sum_log_lambda += std::log(sp.lambda(i));
    }

    double total = 0.0;
    if (d == 1) {
        const double nu = sp.nu(0, 0);
        const double lambda = sp.lambda(0);
        const KernelSpec& kern = sp.kernels[0][0];
        for (int p = 1; p <= frame.grid.M; ++p) {
            const std::complex<double> a = 1.0 - nu * kernel_ft(kern, frame.grid.omega(p));
            const double a2 = std::norm(a);
            if (!(a2 > 0.0)) throw EvaluationError("singular spectral factor");
            const double quad = std::norm(frame.J(0, p - 1)) * a2 / lambda;
            total += quad + sum_log_lambda - std::log(a2);
        }
    } else {
        Eigen::MatrixXcd a(d, d);
        for (int p = 1; p <= frame.grid.M; ++p) {
            const double omega = frame.grid.omega(p);
            a.setIdentity();
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    if (sp.nu(i, j) != 0.0) a(i, j) -= sp.nu(i, j) * kernel_ft(sp.kernels[i][j], omega);
                }
            }
            const Eigen::VectorXcd y = a * frame.J.col(p - 1);
            double quad = 0.0;
            for (int i = 0; i < d; ++i) quad += std::norm(y(i)) / sp.lambda(i);
            const std::complex<double> det = a.determinant();
            const double det2 = std::norm(det);
            if (!(det2 > 0.0)) throw EvaluationError("singular spectral factor");
            total += quad + sum_log_lambda - std::log(det2);
        }
    }
    if (!std::isfinite(total)) throw EvaluationError("Whittle objective is not finite");
    return total / frame.grid.T + par.barrier(theta);
}

double population_contrast(const HawkesModel& m_true, const Parameterization& par,
                           const Eigen::VectorXd& theta, double L) {
    if (!(L > 0.0)) throw ConfigError("band length must be positive");
    const SpectralParams sp_true = spectral_params(m_true);
    const SpectralParams sp = par.spectral(theta);
    const int d = sp.dim();
    if (d != sp_true.dim()) throw EvaluationError("family dimension does not match true model");
    auto integrand = [&](double x) {
        const Eigen::MatrixXcd psi = bartlett_matrix(sp, x);
        const Eigen::MatrixXcd f2 = bartlett_matrix(sp_true, x);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(psi);
        double log_det = 0.0;
        for (int i = 0; i < d; ++i) log_det += std::log(std::abs(lu.matrixLU()(i, i)));
        const double trace = lu.solve(f2).trace().real();
        return log_det + trace;
    };
    const double value = integrate(integrand, 0.0, 2.0 * kPi * L, 1e-8, 40000);
    return value / (2.0 * kPi);
}

FitResult whittle_fit(const EventLog& log, const Parameterization& par, const FitOptions& opts) {
    if (log.events.empty()) throw DataError("cannot fit an empty event log");
    FourierGrid grid{log.horizon, resolve_mt(opts.mt_rule, opts.mt_fixed, log.horizon)};
    const FourierFrame frame = finite_fourier(log, grid);
    return run_fit(par, opts, [&](const Eigen::VectorXd& theta) {
        return whittle_negloglik(frame, par, theta);
    });
}

double hawkes_mle_negloglik(const EventLog& log, const HawkesModel& m, bool use_tables) {
    m.validate();
    if (!(log.horizon > 0.0)) throw DataError("event log must have a positive horizon");
    if (log.dim != m.dim()) throw DataError("event log dimension does not match model");
    if (all_exponential(m)) return mle_exponential_fast(log, m);
    return mle_generic(log, m, use_tables);
}

FitResult mle_fit(const EventLog& log, const Parameterization& par, const FitOptions& opts) {
    if (log.events.empty()) throw DataError("cannot fit an empty event log");
    return run_fit(par, opts, [&](const Eigen::VectorXd& theta) {
        return hawkes_mle_negloglik(log, par.model(theta)) + par.barrier(theta);
    });
}

Eigen::MatrixXd fit_covariance_bootstrap(const Parameterization& par,
                                         const Eigen::VectorXd& theta_hat, double T,
                                         const FitOptions& opts, int reps,
                                         std::uint64_t seed, bool use_mle) {
    if (reps < 2) throw ConfigError("bootstrap needs at least 2 replications");
    const HawkesModel m = par.model(theta_hat);
    const int d = par.dim();
    std::vector<Eigen::VectorXd> draws;
    int failures = 0;
    for (int r = 0; r < reps; ++r) {
        SimConfig cfg;
        cfg.T = T;
        cfg.seed = Rng::mix(seed, static_cast<std::uint64_t>(r));
        FitOptions fit_opts = opts;
        fit_opts.initial = theta_hat;
        try {
            const EventLog log = simulate_hawkes(m, cfg);
            const FitResult fit = use_mle ? mle_fit(log, par, fit_opts)
                                          : whittle_fit(log, par, fit_opts);
            draws.push_back(std::sqrt(T) * (fit.theta_hat - theta_hat));
        } catch (const std::exception&) {
            ++failures;
        }
    }
    if (failures * 5 > reps) {
        throw NumericalError("bootstrap: more than 20% of replication fits failed");
    }
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (const auto& v : draws) mean += v;
    mean /= static_cast<double>(draws.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (const auto& v : draws) {
        const Eigen::VectorXd c = v - mean;
        cov += c * c.transpose();
    }
    cov /= static_cast<double>(draws.size() - 1);
    cov = 0.5 * (cov + cov.transpose()).eval();
    return cov;
}

}  // namespace fhawkes
