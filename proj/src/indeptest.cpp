#include "fhawkes/indeptest.hpp"

#include <cmath>
#include <vector>

#include "fhawkes/errors.hpp"
#include "fhawkes/mlspecial.hpp"
#include "fhawkes/quadrature.hpp"

namespace fhawkes {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

WeightKernel WeightKernel::flat() {
    return WeightKernel{"flat", [](double) { return 1.0; }};
}

WeightKernel WeightKernel::epanechnikov() {
    return WeightKernel{"epanechnikov", [](double x) { return 0.75 * (1.0 - x * x); }};
}

WeightKernel make_weight_kernel(const std::string& name) {
    if (name == "flat") return WeightKernel::flat();
    if (name == "epanechnikov") return WeightKernel::epanechnikov();
    throw ConfigError("unknown weight kernel: " + name);
}

Eigen::MatrixXd intercept_estimates(const FourierFrame& frame, int M_T, const WeightKernel& K) {
    if (M_T < 3) throw ConfigError("need at least 3 frequencies for the intercept regression");
    if (M_T > frame.grid.M) throw ConfigError("requested more frequencies than the frame holds");
    const int d = frame.dim;
    // Weighted design moments are shared by all (u, v) pairs.
    // K_{delta}(omega_p) with delta = M_T / T evaluates K at p / M_T; the
    // common prefactor 1/(2 pi delta) cancels out of the WLS solution.
    std::vector<double> weights(M_T), omega2(M_T);
    double s0 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int p = 1; p <= M_T; ++p) {
        const double w = K.K(static_cast<double>(p) / M_T);
        if (!(w >= 0.0)) throw ConfigError("weight kernel must be nonnegative");
        const double o2 = frame.grid.omega(p) * frame.grid.omega(p);
        weights[p - 1] = w;
        omega2[p - 1] = o2;
        s0 += w;
        s2 += w * o2;
        s4 += w * o2 * o2;
    }
    const double det = s0 * s4 - s2 * s2;
    if (!(det > 1e-12 * (s0 * s4 + 1e-300))) throw ConfigError("degenerate regression design");

    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(d, d);
    for (int u = 1; u <= d; ++u) {
        for (int v = u; v <= d; ++v) {
            double b0 = 0.0, b2 = 0.0;
            for (int p = 1; p <= M_T; ++p) {
                const double y = periodogram_cross(frame, p, u, v).real();
                b0 += weights[p - 1] * y;
                b2 += weights[p - 1] * omega2[p - 1] * y;
            }
            const double intercept = (s4 * b0 - s2 * b2) / det;
            phi(u - 1, v - 1) = intercept;
            phi(v - 1, u - 1) = intercept;
        }
    }
    return phi;
}

double kernel_constant(const WeightKernel& K) {
    const double tol = 1e-12;
    const double h0 = integrate([&](double x) { return K.K(x); }, 0.0, 1.0, tol);
    const double h2 = integrate([&](double x) { return K.K(x) * x * x; }, 0.0, 1.0, tol);
    const double h4 = integrate([&](double x) { return K.K(x) * x * x * x * x; }, 0.0, 1.0, tol);
    const double denom = h4 * h0 - h2 * h2;
    if (!(denom > 1e-12 * (h4 * h0 + 1e-300))) throw ConfigError("degenerate weight kernel");
    auto sq = [&](double x) {
        const double g = (h4 - h2 * x * x) * K.K(x) / denom;
        return g * g;
    };
    return integrate(sq, 0.0, 1.0, 1e-10);
}

double independence_statistic(const Eigen::MatrixXd& phi_hat, int M_T, double c_K) {
    const int d = static_cast<int>(phi_hat.rows());
    if (phi_hat.cols() != d) throw ConfigError("intercept matrix must be square");
    for (int u = 0; u < d; ++u) {
        if (!(phi_hat(u, u) > 0.0)) {
            throw DataError("non-positive diagonal intercept (too few frequencies or degenerate mark)");
        }
    }
    double sum = 0.0;
    for (int u = 0; u < d; ++u) {
        for (int v = u + 1; v < d; ++v) {
            sum += phi_hat(u, v) * phi_hat(u, v) / (phi_hat(u, u) * phi_hat(v, v));
        }
    }
    return M_T * (2.0 / c_K) * sum;
}

double chi_square_sf(double x, int k) {
    if (!(x >= 0.0) || k < 1) throw ConfigError("chi_square_sf needs x >= 0 and k >= 1");
    return 1.0 - regularized_lower_gamma(0.5 * k, 0.5 * x);
}

IndependenceReport run_independence_test(const EventLog& log, MTRule mt_rule, int mt_fixed,
                                         const WeightKernel& K) {
    if (log.dim < 2) throw DataError("need D >= 2 marks for the independence test");
    const int M_T = resolve_mt(mt_rule, mt_fixed, log.horizon);
    const FourierFrame frame = finite_fourier(log, FourierGrid{log.horizon, M_T});

    IndependenceReport report;
    report.M_T = M_T;
    report.delta_T = static_cast<double>(M_T) / log.horizon;
    report.kernel_name = K.name;
    report.phi_hat = intercept_estimates(frame, M_T, K);
    report.c_K = kernel_constant(K);
    report.statistic = independence_statistic(report.phi_hat, M_T, report.c_K);
    report.df = log.dim * (log.dim - 1) / 2;
    report.p_value = chi_square_sf(report.statistic, report.df);
    return report;
}

}  // namespace fhawkes
