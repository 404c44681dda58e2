#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fhawkes/errors.hpp"
#include "fhawkes/mlspecial.hpp"
#include "fhawkes/rng.hpp"

namespace fhawkes {

enum class KernelFamily { Exponential, MittagLeffler };

/// An excitation kernel: a probability density on (0, infinity). The
/// Exponential family is the MittagLeffler family at beta = 1 but keeps its
/// own tag so closed-form fast paths can detect it.
struct KernelSpec {
    KernelFamily family = KernelFamily::Exponential;
    MLParams ml{1.0, 1.0};  // beta is fixed to 1 for Exponential; c is the rate

    static KernelSpec exponential(double c) {
        KernelSpec k;
        k.family = KernelFamily::Exponential;
        k.ml = MLParams{1.0, c};
        k.validate();
        return k;
    }
    static KernelSpec mittag_leffler(double beta, double c) {
        KernelSpec k;
        k.family = KernelFamily::MittagLeffler;
        k.ml = MLParams{beta, c};
        k.validate();
        return k;
    }

    void validate() const { ml.validate(); }
    double density(double x) const;
    double cdf(double x) const;
    double sample(Rng& rng) const;
};

/// Fourier transform of the kernel density, integral convention
/// int exp(-i omega x) g(x) dx.
std::complex<double> kernel_ft(const KernelSpec& k, double omega);

using KernelMatrix = std::vector<std::vector<KernelSpec>>;

/// Full generative description of a process: background rates mu, interactions matrix
/// nu (entry (i,j) = expected children of mark i spawned by a mark-j event)
/// and the kernel matrix (entry (i,j) = delay density of those children).
struct HawkesModel {
    Eigen::VectorXd mu;
    Eigen::MatrixXd nu;
    KernelMatrix kernels;

    int dim() const { return static_cast<int>(mu.size()); }
    void validate() const;
};

/// Perron root of a nonnegative square matrix.
double spectral_radius(const Eigen::MatrixXd& nu);

/// lambda = (I - nu)^{-1} mu; throws NonstationaryError if rho(nu) >= 1.
Eigen::VectorXd average_intensity(const HawkesModel& m);

struct SpectralMatrix {
    double omega = 0.0;
    Eigen::MatrixXcd values;
};

/// The data that the spectral density matrix actually depends on; mu enters
/// only through lambda, so the Whittle objective works with this directly.
struct SpectralParams {
    Eigen::VectorXd lambda;
    Eigen::MatrixXd nu;
    KernelMatrix kernels;

    int dim() const { return static_cast<int>(lambda.size()); }
};

SpectralParams spectral_params(const HawkesModel& m);

/// f2(omega) = A^{-1} Diag(lambda) A^{-H} with A = I - nu (.*) Ghat(omega).
Eigen::MatrixXcd bartlett_matrix(const SpectralParams& sp, double omega);
SpectralMatrix bartlett_spectral_matrix(const HawkesModel& m, double omega);

/// A bijection between an unconstrained vector u in R^d and a constrained
/// parameter vector theta describing a valid spectral family. Positive
/// parameters use log transforms, interaction weights use softplus, and
/// shape exponents use a logistic map onto (0, 1].
class Parameterization {
public:
    virtual ~Parameterization() = default;

    virtual const std::string& family() const = 0;
    virtual int dim() const = 0;
    virtual Eigen::VectorXd to_constrained(const Eigen::VectorXd& u) const = 0;
    virtual Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& theta) const = 0;
    /// Spectral family at theta; throws InvalidThetaError on a vector that
    /// cannot be interpreted (wrong length, out-of-range entries).
    virtual SpectralParams spectral(const Eigen::VectorXd& theta) const = 0;
    /// Full model (with background rates) at theta; throws InvalidThetaError
    /// when the implied mu has a non-positive entry.
    virtual HawkesModel model(const Eigen::VectorXd& theta) const = 0;
    /// Fixed initial value (midpoint of a plausible box) used by fits.
    virtual Eigen::VectorXd initial() const = 0;

    /// Smooth stationarity penalty added to fit objectives:
    /// kappa * max(0, rho(nu) - (1 - eps))^2 plus a matching penalty on
    /// non-positive implied background rates for intensity-parameterized
    /// families. Zero on the interior of the valid region.
    double barrier(const Eigen::VectorXd& theta) const;
};

/// Supported families: poisson, univariate-exponential, univariate-ML,
/// bivariate-ML, bivariate-ML-symmetric-FH6. Throws ConfigError otherwise.
std::shared_ptr<const Parameterization> make_parameterization(const std::string& family);

}  // namespace fhawkes
