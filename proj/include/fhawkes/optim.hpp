#pragma once

#include <functional>

#include <Eigen/Dense>

namespace fhawkes {

struct NelderMeadOptions {
    int max_iter = 2000;   // function-evaluation budget
    double x_tol = 1e-6;   // simplex diameter
    double f_tol = 1e-9;   // objective spread
    double init_step = 0.25;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int iterations = 0;  // objective evaluations used
    bool converged = false;
};

/// Derivative-free simplex minimization. The objective may return +infinity
/// (or any non-finite value) to mark an infeasible point; such points are
/// ranked worst but do not abort the search.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& x0, const NelderMeadOptions& opts);

}  // namespace fhawkes
