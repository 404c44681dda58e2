#pragma once

#include <cmath>
#include <queue>

#include "fhawkes/errors.hpp"

namespace fhawkes {

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
void gk15(const F& f, double a, double b, double* value, double* error) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fc = f(mid);
    double kronrod = fc * kGk15Weights[7];
    double gauss = fc * kG7Weights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGk15Nodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kronrod += fsum * kGk15Weights[i];
        if (i % 2 == 1) gauss += fsum * kG7Weights[i / 2];
    }
    *value = kronrod * half;
    *error = std::abs((kronrod - gauss) * half);
}

struct QuadInterval {
    double a, b, value, error;
    bool operator<(const QuadInterval& o) const { return error < o.error; }
};

}  // namespace detail

/// Adaptive Gauss-Kronrod quadrature of f on [a, b] to absolute tolerance.
/// Worst-error-first bisection with a bounded interval budget; throws
/// NumericalError if the budget is exhausted without meeting the tolerance.
template <typename F>
double integrate(const F& f, double a, double b, double abs_tol, int max_intervals = 4000) {
    if (a == b) return 0.0;
    std::priority_queue<detail::QuadInterval> queue;
    detail::QuadInterval whole{a, b, 0.0, 0.0};
    detail::gk15(f, a, b, &whole.value, &whole.error);
    queue.push(whole);
    double total = whole.value, total_err = whole.error;
    int n = 1;
    while (total_err > abs_tol && n < max_intervals) {
        detail::QuadInterval top = queue.top();
        queue.pop();
        const double mid = 0.5 * (top.a + top.b);
        detail::QuadInterval left{top.a, mid, 0.0, 0.0}, right{mid, top.b, 0.0, 0.0};
        detail::gk15(f, top.a, mid, &left.value, &left.error);
        detail::gk15(f, mid, top.b, &right.value, &right.error);
        total += left.value + right.value - top.value;
        total_err += left.error + right.error - top.error;
        queue.push(left);
        queue.push(right);
        ++n;
    }
    if (!std::isfinite(total) || total_err > abs_tol * 64.0 + 1e-300) {
        throw NumericalError("quadrature did not converge");
    }
    return total;
}

}  // namespace fhawkes
