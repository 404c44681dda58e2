#include "fhawkes/mlspecial.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "fhawkes/quadrature.hpp"

namespace fhawkes {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// 1/Gamma(x) for arbitrary real x; zero at the poles x = 0, -1, -2, ...
double rgamma(double x) {
    if (x > 0.5) {
        if (x > 171.0) return 0.0;
        return 1.0 / std::tgamma(x);
    }
    // Exact zero at (and within rounding noise of) the poles 0, -1, -2, ...
    // sin(kPi * x) is not exactly zero at integer x, so test explicitly.
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-10 * (1.0 + std::abs(x))) return 0.0;
    const double s = std::sin(kPi * x);
    if (s == 0.0) return 0.0;
    // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    const double v = std::lgamma(1.0 - x) + std::log(std::abs(s) / kPi);
    if (v > 700.0) return s > 0 ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
    return std::copysign(std::exp(v), s);
}

// Power series sum_n z^n / Gamma(a n + b), Kahan-compensated.
std::complex<double> ml_series(double a, double b, std::complex<double> z) {
    std::complex<double> sum(0.0, 0.0), comp(0.0, 0.0), zn(1.0, 0.0);
    int tiny_streak = 0;
    for (int n = 0; n < 400; ++n) {
        const std::complex<double> term = zn * rgamma(a * n + b);
        const std::complex<double> y = term - comp;
        const std::complex<double> t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        zn *= z;
        const double mag = std::abs(zn);
        if (!std::isfinite(mag) || mag > 1e290) break;
        if (std::abs(term) <= 1e-17 * (std::abs(sum) + 1e-300)) {
            if (++tiny_streak >= 3) break;  // Gamma poles give isolated zero terms
        } else {
            tiny_streak = 0;
        }
    }
    return sum;
}

// Asymptotic expansion -sum_{k>=1} z^{-k} / Gamma(b - a k) for z = -x,
// x large. Returns false when the optimal truncation error is too big.
bool ml_asymptotic(double a, double b, double x, double* out) {
    // Collect the nonzero terms up to (and one past) the optimal truncation
    // point. The remainder estimate must look one term beyond the smallest
    // one: a term can be anomalously tiny when b - a k sits next to a Gamma
    // pole, and the true remainder is set by the next regular-sized term.
    std::vector<double> mags, partials;
    double sum = 0.0;
    double xk = 1.0;  // x^{-k}
    double smallest = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 60; ++k) {
        xk /= x;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // (-x)^{-k}
        const double rg = rgamma(b - a * k);
        if (rg == 0.0) continue;  // Gamma pole, term drops out
        const double term = -sign * xk * rg;
        const double mag = std::abs(term);
        if (!std::isfinite(mag) || mag > 1e3 * smallest) break;  // deep in the divergent tail
        sum += term;
        mags.push_back(mag);
        partials.push_back(sum);
        smallest = std::min(smallest, mag);
    }
    if (mags.empty()) return false;
    std::size_t m = 0;
    for (std::size_t i = 1; i < mags.size(); ++i) {
        if (mags[i] < mags[m]) m = i;
    }
    const double err = (m + 1 < mags.size()) ? std::max(mags[m], mags[m + 1]) : mags[m];
    const double best = partials[m];
    if (best == 0.0 || !(err <= 1e-13 * std::abs(best))) return false;
    *out = best;
    return true;
}

// Branch-cut integral representation of E_{a,b}(-x) for 0 < a < 1,
// b < 1 + a, x > 0 (Gorenflo-Loutchko-Luchko form; only the cut
// contributes since arg(-x) = pi > a pi).
double ml_integral_negaxis(double a, double b, double x) {
    const double s1 = std::sin(kPi * (1.0 - b));
    const double s2 = std::sin(kPi * (1.0 - b + a));
    const double ca = std::cos(kPi * a);
    const double p = (1.0 - b) / a;
    auto kern = [&](double r) -> double {
        const double num = r * s1 + x * s2;
        const double den = (r * r + 2.0 * r * x * ca) + x * x;
        return (1.0 / (kPi * a)) * std::pow(r, p) * std::exp(-std::pow(r, 1.0 / a)) * num / den;
    };
    const double upper = std::pow(45.0, a);
    // split near the denominator minimum to help the adaptive rule
    double split = (ca < 0.0) ? -x * ca : 0.25 * upper;
    if (split <= 0.0 || split >= upper) split = 0.5 * upper;
    const double tol = 1e-15 * (1.0 + 1.0 / x);
    return integrate(kern, 0.0, split, tol) + integrate(kern, split, upper, tol);
}

}  // namespace

std::complex<double> mittag_leffler(double a, double b, std::complex<double> z) {
    if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b) ||
        !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::domain_error("mittag_leffler: need finite a > 0, finite b and z");
    }
    if (a == 1.0 && b == 1.0) return std::exp(z);
    if (a == 1.0 && b == 2.0) {
        if (std::abs(z) < 1e-8) return 1.0 + z / 2.0;
        return (std::exp(z) - 1.0) / z;
    }
    if (z.imag() == 0.0 && z.real() < 0.0 && a < 1.0) {
        const double x = -z.real();
        if (x <= 2.0) return ml_series(a, b, z);
        double v;
        if (ml_asymptotic(a, b, x, &v)) return v;
        if (b < 1.0 + a) return ml_integral_negaxis(a, b, x);
    }
    return ml_series(a, b, z);
}

double ml_density(double x, const MLParams& p) {
    p.validate();
    if (!(x > 0.0)) return 0.0;
    if (p.beta == 1.0) return p.c * std::exp(-p.c * x);
    const double u = std::pow(p.c * x, p.beta);
    const double e = mittag_leffler(p.beta, p.beta, -u).real();
    return std::pow(p.c, p.beta) * std::pow(x, p.beta - 1.0) * e;
}

double ml_cdf(double x, const MLParams& p) {
    p.validate();
    if (!(x > 0.0)) return 0.0;
    if (p.beta == 1.0) return -std::expm1(-p.c * x);
    const double u = std::pow(p.c * x, p.beta);
    const double e = mittag_leffler(p.beta, 1.0, -u).real();
    return std::min(1.0, std::max(0.0, 1.0 - e));
}

std::complex<double> ml_fourier(double omega, const MLParams& p) {
    p.validate();
    if (omega == 0.0) return {1.0, 0.0};
    const double r = std::pow(std::abs(omega) / p.c, p.beta);
    const double ang = (omega > 0 ? 1.0 : -1.0) * p.beta * kPi / 2.0;
    const std::complex<double> den(1.0 + r * std::cos(ang), r * std::sin(ang));
    return 1.0 / den;
}

double ml_sample(const MLParams& p, Rng& rng) {
    p.validate();
    const double e = rng.exponential(1.0);
    if (p.beta == 1.0) return e / p.c;
    const double beta = p.beta;
    const double u = kPi * rng.uniform();
    const double w = rng.exponential(1.0);
    // Kanter: S = sin(beta u) sin((1-beta)u)^{(1-beta)/beta}
    //             / (sin(u)^{1/beta} W^{(1-beta)/beta}) has LT exp(-s^beta)
    const double ratio = (1.0 - beta) / beta;
    const double stable = std::sin(beta * u) * std::pow(std::sin((1.0 - beta) * u) / w, ratio) /
                          std::pow(std::sin(u), 1.0 / beta);
    return std::pow(e, 1.0 / beta) * stable / p.c;
}

double regularized_lower_gamma(double s, double x) {
    if (!(s > 0.0) || !(x >= 0.0)) throw std::domain_error("regularized_lower_gamma: need s > 0, x >= 0");
    if (x == 0.0) return 0.0;
    const double lg = std::lgamma(s);
    if (x < s + 1.0) {
        // series for gamma(s,x)
        double term = 1.0 / s, sum = term, ap = s;
        for (int n = 0; n < 500; ++n) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + s * std::log(x) - lg);
    }
    // Lentz continued fraction for Gamma(s,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    const double q = std::exp(-x + s * std::log(x) - lg) * h;
    return 1.0 - q;
}

}  // namespace fhawkes
