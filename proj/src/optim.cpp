#include "fhawkes/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace fhawkes {

namespace {

double sanitize(double f) {
    return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& x0, const NelderMeadOptions& opts) {
    const int n = static_cast<int>(x0.size());
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return sanitize(objective(x));
    };

    std::vector<Eigen::VectorXd> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    for (int i = 1; i <= n; ++i) {
        const double base = xs[i](i - 1);
        xs[i](i - 1) = base + opts.init_step * std::max(1.0, std::abs(base));
    }
    for (int i = 0; i <= n; ++i) fs[i] = eval(xs[i]);

    std::vector<int> order(n + 1);
    std::iota(order.begin(), order.end(), 0);
    auto sort_simplex = [&]() {
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    };

    bool converged = false;
    while (evals < opts.max_iter) {
        sort_simplex();
        const int best = order[0], worst = order[n], second_worst = order[n - 1];

        double diameter = 0.0;
        for (int i = 1; i <= n; ++i) {
            diameter = std::max(diameter, (xs[order[i]] - xs[best]).cwiseAbs().maxCoeff());
        }
        const double spread = fs[worst] - fs[best];
        if (diameter < opts.x_tol && (std::isfinite(spread) && spread < opts.f_tol)) {
            converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i) {
            if (i != worst) centroid += xs[i];
        }
        centroid /= n;

        const Eigen::VectorXd reflected = centroid + (centroid - xs[worst]);
        const double f_reflected = eval(reflected);

        if (f_reflected < fs[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[worst]);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                xs[worst] = expanded;
                fs[worst] = f_expanded;
            } else {
                xs[worst] = reflected;
                fs[worst] = f_reflected;
            }
        } else if (f_reflected < fs[second_worst]) {
            xs[worst] = reflected;
            fs[worst] = f_reflected;
        } else {
            const bool outside = f_reflected < fs[worst];
            const Eigen::VectorXd contracted =
                outside ? (centroid + 0.5 * (reflected - centroid)).eval()
                        : (centroid + 0.5 * (xs[worst] - centroid)).eval();
            const double f_contracted = eval(contracted);
            if (f_contracted < std::min(f_reflected, fs[worst])) {
                xs[worst] = contracted;
                fs[worst] = f_contracted;
            } else {
                // shrink toward the best vertex
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
                    fs[i] = eval(xs[i]);
                }
            }
        }
    }

    sort_simplex();
    NelderMeadResult result;
    result.x = xs[order[0]];
    result.f = fs[order[0]];
    result.iterations = evals;
    result.converged = converged;
    return result;
}

}  // namespace fhawkes
