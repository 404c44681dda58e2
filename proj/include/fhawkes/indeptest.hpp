#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "fhawkes/spectral.hpp"
#include "fhawkes/whittle.hpp"

namespace fhawkes {

/// Symmetric nonnegative weight function on [-1, 1].
struct WeightKernel {
    std::string name;
    std::function<double(double)> K;

    static WeightKernel flat();          // K = 1
    static WeightKernel epanechnikov();  // K(x) = 0.75 (1 - x^2)
};

WeightKernel make_weight_kernel(const std::string& name);

/// Intercepts of the weighted least squares regressions of
/// Re[J^u(omega_p) conj(J^v(omega_p))] on (1, omega_p^2), p = 1..M_T, with
/// weights K(omega_p / (2 pi delta_T)) and delta_T = M_T / T. The result is
/// symmetrized: entry (u,v) for u < v is mirrored to (v,u).
Eigen::MatrixXd intercept_estimates(const FourierFrame& frame, int M_T, const WeightKernel& K);

/// c_K = int_0^1 ((H4 - H2 x^2) K(x) / (H4 H0 - H2^2))^2 dx with
/// H_{2l} = int_0^1 K(x) x^{2l} dx. Flat kernel: 9/4.
double kernel_constant(const WeightKernel& K);

/// M_T (2 / c_K) sum_{u<v} phi_uv^2 / (phi_uu phi_vv); requires positive
/// diagonal intercepts (DataError otherwise).
double independence_statistic(const Eigen::MatrixXd& phi_hat, int M_T, double c_K);

/// Chi-square survival function, 1 - P(k/2, x/2).
double chi_square_sf(double x, int k);

struct IndependenceReport {
    Eigen::MatrixXd phi_hat;
    int M_T = 0;
    double delta_T = 0.0;
    double c_K = 0.0;
    std::string kernel_name;
    double statistic = 0.0;
    int df = 0;  // D (D - 1) / 2
    double p_value = 1.0;
};

/// Full test pipeline. Requires D >= 2 (DataError otherwise). The default
/// frequency-count rule is M_T = floor(10 sqrt(T)).
IndependenceReport run_independence_test(const EventLog& log,
                                         MTRule mt_rule = MTRule::TenSqrtT, int mt_fixed = 0,
                                         const WeightKernel& K = WeightKernel::flat());

}  // namespace fhawkes
