#include "fhawkes/model.hpp"

#include <algorithm>
#include <cmath>

namespace fhawkes {

namespace {

constexpr double kBarrierKappa = 1e6;
constexpr double kBarrierEps = 1e-3;

double softplus(double u) {
    if (u > 30.0) return u;
    if (u < -30.0) return std::exp(u);
    return std::log1p(std::exp(u));
}

double softplus_inv(double x) {
    if (!(x >= 0.0)) throw InvalidThetaError("softplus inverse needs a nonnegative value");
    if (x > 30.0) return x;
    return std::log(std::expm1(std::max(x, 1e-300)));
}

double logistic(double u) {
    // (0, 1]; the upper boundary is reachable within rounding
    return 1.0 / (1.0 + std::exp(-u));
}

double logistic_inv(double x) {
    const double xc = std::clamp(x, 1e-9, 1.0 - 1e-9);
    return std::log(xc / (1.0 - xc));
}

double log_inv(double x) {
    if (!(x > 0.0)) throw InvalidThetaError("log transform needs a positive value");
    return std::log(x);
}

}  // namespace

double KernelSpec::density(double x) const { return ml_density(x, ml); }
double KernelSpec::cdf(double x) const { return ml_cdf(x, ml); }
double KernelSpec::sample(Rng& rng) const { return ml_sample(ml, rng); }

std::complex<double> kernel_ft(const KernelSpec& k, double omega) {
    if (k.family == KernelFamily::Exponential) {
        const double c = k.ml.c;
        return c / std::complex<double>(c, omega);
    }
    return ml_fourier(omega, k.ml);
}

void HawkesModel::validate() const {
    const int d = dim();
    if (d < 1) throw ConfigError("model must have dimension >= 1");
    if (nu.rows() != d || nu.cols() != d) throw ConfigError("nu must be D x D");
    if (static_cast<int>(kernels.size()) != d) throw ConfigError("kernel matrix must be D x D");
    for (int i = 0; i < d; ++i) {
        if (!(mu(i) > 0.0)) throw ConfigError("background rates must be positive");
        if (static_cast<int>(kernels[i].size()) != d) throw ConfigError("kernel matrix must be D x D");
        for (int j = 0; j < d; ++j) {
            if (!(nu(i, j) >= 0.0)) throw ConfigError("interaction weights must be nonnegative");
            kernels[i][j].validate();
        }
    }
}

double spectral_radius(const Eigen::MatrixXd& nu) {
    if (nu.rows() != nu.cols()) throw ConfigError("spectral_radius needs a square matrix");
    if (nu.rows() == 1) return std::abs(nu(0, 0));
    Eigen::EigenSolver<Eigen::MatrixXd> es(nu, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::VectorXd average_intensity(const HawkesModel& m) {
    m.validate();
    if (spectral_radius(m.nu) >= 1.0) {
        throw NonstationaryError("nonstationary model: spectral radius of nu is >= 1");
    }
    const int d = m.dim();
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(d, d) - m.nu;
    return a.partialPivLu().solve(m.mu);
}

SpectralParams spectral_params(const HawkesModel& m) {
    SpectralParams sp;
    sp.lambda = average_intensity(m);
    sp.nu = m.nu;
    sp.kernels = m.kernels;
    return sp;
}

Eigen::MatrixXcd bartlett_matrix(const SpectralParams& sp, double omega) {
    const int d = sp.dim();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (sp.nu(i, j) != 0.0) {
                a(i, j) -= sp.nu(i, j) * kernel_ft(sp.kernels[i][j], omega);
            }
        }
    }
    Eigen::MatrixXcd ainv = a.partialPivLu().inverse();
    Eigen::MatrixXcd f = ainv * sp.lambda.asDiagonal() * ainv.adjoint();
    // symmetrize away the last bits of rounding
    f = 0.5 * (f + f.adjoint()).eval();
    if (!f.allFinite()) throw NumericalError("spectral density evaluation overflowed");
    return f;
}

SpectralMatrix bartlett_spectral_matrix(const HawkesModel& m, double omega) {
    if (spectral_radius(m.nu) >= 1.0) {
        throw NonstationaryError("nonstationary model: spectral radius of nu is >= 1");
    }
    SpectralMatrix out;
    out.omega = omega;
    out.values = bartlett_matrix(spectral_params(m), omega);
    return out;
}

double Parameterization::barrier(const Eigen::VectorXd& theta) const {
    const SpectralParams sp = spectral(theta);
    double pen = 0.0;
    const double rho = spectral_radius(sp.nu);
    const double excess = rho - (1.0 - kBarrierEps);
    if (excess > 0.0) pen += kBarrierKappa * excess * excess;
    // implied background rates must stay positive
    const int d = sp.dim();
    Eigen::VectorXd mu = (Eigen::MatrixXd::Identity(d, d) - sp.nu) * sp.lambda;
    for (int i = 0; i < d; ++i) {
        if (mu(i) < 0.0) pen += kBarrierKappa * mu(i) * mu(i);
    }
    return pen;
}

namespace {

class PoissonFamily final : public Parameterization {
public:
    const std::string& family() const override {
        static const std::string name = "poisson";
        return name;
    }
    int dim() const override { return 1; }
    Eigen::VectorXd to_constrained(const Eigen::VectorXd& u) const override {
        check(u);
        Eigen::VectorXd t(1);
        t(0) = std::exp(u(0));
        return t;
    }
    Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& theta) const override {
        check(theta);
        Eigen::VectorXd u(1);
        u(0) = log_inv(theta(0));
        return u;
    }
    SpectralParams spectral(const Eigen::VectorXd& theta) const override {
        check(theta);
        if (!(theta(0) > 0.0)) throw InvalidThetaError("poisson: mu must be positive");
        SpectralParams sp;
        sp.lambda = theta;
        sp.nu = Eigen::MatrixXd::Zero(1, 1);
        sp.kernels = {{KernelSpec::exponential(1.0)}};
        return sp;
    }
    HawkesModel model(const Eigen::VectorXd& theta) const override {
        SpectralParams sp = spectral(theta);
        HawkesModel m;
        m.mu = sp.lambda;
        m.nu = sp.nu;
        m.kernels = sp.kernels;
        return m;
    }
    Eigen::VectorXd initial() const override {
        Eigen::VectorXd t(1);
        t << 1.0;
        return t;
    }

private:
    static void check(const Eigen::VectorXd& v) {
        if (v.size() != 1) throw InvalidThetaError("poisson: expected 1 parameter");
    }
};

// theta = (mu, nu, c) for univariate-exponential, (mu, nu, beta, c) for
// univariate-ML.
class UnivariateFamily final : public Parameterization {
public:
    explicit UnivariateFamily(bool mlkernel) : ml_(mlkernel) {
        name_ = ml_ ? "univariate-ML" : "univariate-exponential";
    }
    const std::string& family() const override { return name_; }
    int dim() const override { return ml_ ? 4 : 3; }
    Eigen::VectorXd to_constrained(const Eigen::VectorXd& u) const override {
        check(u);
        Eigen::VectorXd t(dim());
        t(0) = std::exp(u(0));
        t(1) = softplus(u(1));
        if (ml_) {
            t(2) = logistic(u(2));
            t(3) = std::exp(u(3));
        } else {
            t(2) = std::exp(u(2));
        }
        return t;
    }
    Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& theta) const override {
        check(theta);
        Eigen::VectorXd u(dim());
        u(0) = log_inv(theta(0));
        u(1) = softplus_inv(theta(1));
        if (ml_) {
            u(2) = logistic_inv(theta(2));
            u(3) = log_inv(theta(3));
        } else {
            u(2) = log_inv(theta(2));
        }
        return u;
    }
    SpectralParams spectral(const Eigen::VectorXd& theta) const override {
        check(theta);
        const double mu = theta(0), nu = theta(1);
        if (!(mu > 0.0) || !(nu >= 0.0)) throw InvalidThetaError(name_ + ": invalid theta");
        SpectralParams sp;
        sp.nu = Eigen::MatrixXd::Constant(1, 1, nu);
        sp.lambda = Eigen::VectorXd::Constant(1, nu < 1.0 ? mu / (1.0 - nu) : 1e12 * mu);
        sp.kernels = {{kernel(theta)}};
        return sp;
    }
    HawkesModel model(const Eigen::VectorXd& theta) const override {
        check(theta);
        HawkesModel m;
        m.mu = Eigen::VectorXd::Constant(1, theta(0));
        m.nu = Eigen::MatrixXd::Constant(1, 1, theta(1));
        m.kernels = {{kernel(theta)}};
        m.validate();
        return m;
    }
    Eigen::VectorXd initial() const override {
        Eigen::VectorXd t(dim());
        if (ml_) {
            t << 1.0, 0.5, 0.65, 1.0;
        } else {
            t << 1.0, 0.5, 1.0;
        }
        return t;
    }

private:
    KernelSpec kernel(const Eigen::VectorXd& theta) const {
        if (ml_) {
            if (!(theta(2) > 0.0 && theta(2) <= 1.0) || !(theta(3) > 0.0)) {
                throw InvalidThetaError(name_ + ": invalid kernel parameters");
            }
            return KernelSpec::mittag_leffler(theta(2), theta(3));
        }
        if (!(theta(2) > 0.0)) throw InvalidThetaError(name_ + ": invalid kernel rate");
        return KernelSpec::exponential(theta(2));
    }
    void check(const Eigen::VectorXd& v) const {
        if (v.size() != dim()) throw InvalidThetaError(name_ + ": wrong parameter count");
    }

    bool ml_;
    std::string name_;
};

// theta = (1/lambda_1, 1/lambda_2, nu_11, nu_21, nu_12, nu_22,
//          beta_11, beta_21, beta_12, beta_22, c_11, c_21, c_12, c_22),
// matrix blocks laid out column-major.
class BivariateMLFamily final : public Parameterization {
public:
    const std::string& family() const override {
        static const std::string name = "bivariate-ML";
        return name;
    }
    int dim() const override { return 14; }
    Eigen::VectorXd to_constrained(const Eigen::VectorXd& u) const override {
        check(u);
        Eigen::VectorXd t(14);
        for (int k = 0; k < 2; ++k) t(k) = std::exp(u(k));
        for (int k = 2; k < 6; ++k) t(k) = softplus(u(k));
        for (int k = 6; k < 10; ++k) t(k) = logistic(u(k));
        for (int k = 10; k < 14; ++k) t(k) = std::exp(u(k));
        return t;
    }
    Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& theta) const override {
        check(theta);
        Eigen::VectorXd u(14);
        for (int k = 0; k < 2; ++k) u(k) = log_inv(theta(k));
        for (int k = 2; k < 6; ++k) u(k) = softplus_inv(theta(k));
        for (int k = 6; k < 10; ++k) u(k) = logistic_inv(theta(k));
        for (int k = 10; k < 14; ++k) u(k) = log_inv(theta(k));
        return u;
    }
    SpectralParams spectral(const Eigen::VectorXd& theta) const override {
        check(theta);
        SpectralParams sp;
        sp.lambda = Eigen::VectorXd(2);
        for (int k = 0; k < 2; ++k) {
            if (!(theta(k) > 0.0)) throw InvalidThetaError("bivariate-ML: inverse intensities must be positive");
            sp.lambda(k) = 1.0 / theta(k);
        }
        sp.nu = Eigen::MatrixXd(2, 2);
        sp.kernels.assign(2, std::vector<KernelSpec>(2, KernelSpec::exponential(1.0)));
        for (int j = 0; j < 2; ++j) {
            for (int i = 0; i < 2; ++i) {
                const int k = 2 * j + i;
                if (!(theta(2 + k) >= 0.0)) throw InvalidThetaError("bivariate-ML: nu must be nonnegative");
                sp.nu(i, j) = theta(2 + k);
                const double beta = theta(6 + k);
                const double c = theta(10 + k);
                if (!(beta > 0.0 && beta <= 1.0) || !(c > 0.0)) {
                    throw InvalidThetaError("bivariate-ML: invalid kernel parameters");
                }
                sp.kernels[i][j] = KernelSpec::mittag_leffler(beta, c);
            }
        }
        return sp;
    }
    HawkesModel model(const Eigen::VectorXd& theta) const override {
        SpectralParams sp = spectral(theta);
        Eigen::VectorXd mu = (Eigen::MatrixXd::Identity(2, 2) - sp.nu) * sp.lambda;
        if (!(mu(0) > 0.0) || !(mu(1) > 0.0)) {
            throw InvalidThetaError("bivariate-ML: implied background rates are not positive");
        }
        HawkesModel m;
        m.mu = mu;
        m.nu = sp.nu;
        m.kernels = sp.kernels;
        m.validate();
        return m;
    }
    Eigen::VectorXd initial() const override {
        Eigen::VectorXd t(14);
        t << 0.3, 0.3, 0.4, 0.4, 0.4, 0.4, 0.8, 0.8, 0.8, 0.8, 1.0, 1.0, 1.0, 1.0;
        return t;
    }

private:
    static void check(const Eigen::VectorXd& v) {
        if (v.size() != 14) throw InvalidThetaError("bivariate-ML: expected 14 parameters");
    }
};

// theta = (a, b): the cross-interaction weights of the symmetric bivariate
// family with mu = (1/2, 1/2), diagonal nu = 1/2 and fixed kernels.
class SymmetricCrossFamily final : public Parameterization {
public:
    const std::string& family() const override {
        static const std::string name = "bivariate-ML-symmetric-FH6";
        return name;
    }
    int dim() const override { return 2; }
    Eigen::VectorXd to_constrained(const Eigen::VectorXd& u) const override {
        check(u);
        Eigen::VectorXd t(2);
        t(0) = softplus(u(0));
        t(1) = softplus(u(1));
        return t;
    }
    Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& theta) const override {
        check(theta);
        Eigen::VectorXd u(2);
        u(0) = softplus_inv(theta(0));
        u(1) = softplus_inv(theta(1));
        return u;
    }
    SpectralParams spectral(const Eigen::VectorXd& theta) const override {
        HawkesModel m = model(theta);
        SpectralParams sp;
        // stationary iff ab < 1/4; expose the family even slightly outside,
        // the barrier steers the optimizer back
        const double denom = 0.25 - theta(0) * theta(1);
        sp.lambda = Eigen::VectorXd(2);
        if (denom > 0.0) {
            sp.lambda(0) = (0.25 + theta(0) / 2.0) / denom;
            sp.lambda(1) = (0.25 + theta(1) / 2.0) / denom;
        } else {
            sp.lambda.setConstant(1e12);
        }
        sp.nu = m.nu;
        sp.kernels = m.kernels;
        return sp;
    }
    HawkesModel model(const Eigen::VectorXd& theta) const override {
        check(theta);
        if (!(theta(0) >= 0.0) || !(theta(1) >= 0.0)) {
            throw InvalidThetaError("symmetric family: a and b must be nonnegative");
        }
        HawkesModel m;
        m.mu = Eigen::VectorXd::Constant(2, 0.5);
        m.nu = Eigen::MatrixXd(2, 2);
        m.nu << 0.5, theta(0), theta(1), 0.5;
        m.kernels = {{KernelSpec::mittag_leffler(1.0, 1.0), KernelSpec::mittag_leffler(0.9, 1.1)},
                     {KernelSpec::mittag_leffler(0.8, 0.9), KernelSpec::mittag_leffler(1.0, 1.0)}};
        m.validate();
        return m;
    }
    Eigen::VectorXd initial() const override {
        Eigen::VectorXd t(2);
        t << 0.15, 0.15;
        return t;
    }

private:
    static void check(const Eigen::VectorXd& v) {
        if (v.size() != 2) throw InvalidThetaError("symmetric family: expected 2 parameters");
    }
};

}  // namespace

std::shared_ptr<const Parameterization> make_parameterization(const std::string& family) {
    if (family == "poisson") return std::make_shared<PoissonFamily>();
    if (family == "univariate-exponential") return std::make_shared<UnivariateFamily>(false);
    if (family == "univariate-ML") return std::make_shared<UnivariateFamily>(true);
    if (family == "bivariate-ML") return std::make_shared<BivariateMLFamily>();
    if (family == "bivariate-ML-symmetric-FH6") return std::make_shared<SymmetricCrossFamily>();
    throw ConfigError("unknown parameter family: " + family);
}

}  // namespace fhawkes
