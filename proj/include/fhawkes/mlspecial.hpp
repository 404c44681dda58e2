#pragma once

#include <complex>

#include "fhawkes/errors.hpp"
#include "fhawkes/rng.hpp"

namespace fhawkes {

/// Parameters of the Mittag-Leffler distribution: tail exponent beta in
/// (0, 1] and rate c > 0. beta = 1 is the exponential distribution.
struct MLParams {
    double beta;
    double c;

    void validate() const {
        if (!(beta > 0.0 && beta <= 1.0)) throw std::domain_error("MLParams: beta must lie in (0,1]");
        if (!(c > 0.0)) throw std::domain_error("MLParams: c must be positive");
    }
};

/// Two-parameter Mittag-Leffler function E_{a,b}(z).
///
/// High accuracy (rel. error <= 1e-10) is guaranteed on the real negative
/// axis for a in (0,1], b in {a, 1}, which is the regime the library uses
/// for densities and CDFs. Elsewhere the power series is used; for complex
/// z with |z| well beyond ~20 accuracy degrades gracefully (cancellation),
/// which is acceptable since no caller reaches that regime.
std::complex<double> mittag_leffler(double a, double b, std::complex<double> z);

/// Mittag-Leffler density c^beta x^{beta-1} E_{beta,beta}(-(cx)^beta) for
/// x > 0, zero for x <= 0.
double ml_density(double x, const MLParams& p);

/// Distribution function F(x) = 1 - E_{beta,1}(-(cx)^beta); 0 for x <= 0.
double ml_cdf(double x, const MLParams& p);

/// Fourier transform of the density: [1 + c^{-beta} (i omega)^beta]^{-1}
/// with (i omega)^beta on the principal branch
/// |omega|^beta exp(i sign(omega) beta pi / 2); returns 1 at omega = 0.
std::complex<double> ml_fourier(double omega, const MLParams& p);

/// Exact draw from the Mittag-Leffler distribution:
/// X = (1/c) E^{1/beta} S_beta with E unit exponential and S_beta a
/// positive beta-stable variate (Kanter's construction). For beta = 1 the
/// draw is exactly exponential with rate c.
double ml_sample(const MLParams& p, Rng& rng);

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
double regularized_lower_gamma(double s, double x);

}  // namespace fhawkes
