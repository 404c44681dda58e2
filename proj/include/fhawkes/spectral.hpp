#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "fhawkes/simulate.hpp"

namespace fhawkes {

/// Fourier frequencies omega_p = 2 pi p / T for p = 1..M (frequency zero is
/// deliberately excluded).
struct FourierGrid {
    double T = 0.0;
    int M = 0;

    double omega(int p) const { return 2.0 * 3.141592653589793238462643383279502884 * p / T; }
};

/// J[j-1][p-1] = T^{-1/2} sum over mark-j events of exp(-i omega_p t).
struct FourierFrame {
    FourierGrid grid;
    int dim = 0;
    Eigen::MatrixXcd J;  // D x M
};

FourierFrame finite_fourier(const EventLog& log, const FourierGrid& grid);

/// A_T(Phi) = (1/T) sum_p J(omega_p)^H Phi(omega_p) J(omega_p); Phi must be
/// Hermitian at every grid frequency (checked, EvaluationError otherwise).
double spectral_empirical(const FourierFrame& frame,
                          const std::function<Eigen::MatrixXcd(double)>& phi);

/// J^u(omega_p) * conj(J^v(omega_p)); u, v, p are 1-based.
std::complex<double> periodogram_cross(const FourierFrame& frame, int p, int u, int v);

}  // namespace fhawkes
