#include "fhawkes/spectral.hpp"

#include <cmath>

#include "fhawkes/errors.hpp"

namespace fhawkes {

FourierFrame finite_fourier(const EventLog& log, const FourierGrid& grid) {
    if (log.horizon != grid.T) throw DataError("event log horizon does not match Fourier grid");
    if (!(grid.T > 0.0) || grid.M < 1) throw ConfigError("invalid Fourier grid");
    FourierFrame frame;
    frame.grid = grid;
    frame.dim = log.dim;
    frame.J = Eigen::MatrixXcd::Zero(log.dim, grid.M);

    const double base_freq = 2.0 * 3.141592653589793238462643383279502884 / grid.T;
    for (const Event& e : log.events) {
        const int row = e.mark - 1;
        // phase for p: exp(-i omega_p t) = step^p; recurrence with periodic
        // re-anchoring to keep the accumulated rounding below ~1e-12
        const std::complex<double> step = std::polar(1.0, -base_freq * e.time);
        std::complex<double> phase = step;
        for (int p = 1; p <= grid.M; ++p) {
            if (p % 512 == 0) phase = std::polar(1.0, -base_freq * p * e.time);
            frame.J(row, p - 1) += phase;
            phase *= step;
        }
    }
    frame.J /= std::sqrt(grid.T);
    return frame;
}

double spectral_empirical(const FourierFrame& frame,
                          const std::function<Eigen::MatrixXcd(double)>& phi) {
    double total = 0.0;
    for (int p = 1; p <= frame.grid.M; ++p) {
        const double omega = frame.grid.omega(p);
        const Eigen::MatrixXcd m = phi(omega);
        if (m.rows() != frame.dim || m.cols() != frame.dim) {
            throw EvaluationError("weight matrix has wrong shape");
        }
        const double scale = m.cwiseAbs().maxCoeff();
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * (scale + 1.0)) {
            throw EvaluationError("weight matrix is not Hermitian");
        }
        const Eigen::VectorXcd j = frame.J.col(p - 1);
        const std::complex<double> q = j.dot(m * j);  // Eigen's dot conjugates the left factor
        total += q.real();
    }
    return total / frame.grid.T;
}

std::complex<double> periodogram_cross(const FourierFrame& frame, int p, int u, int v) {
    if (p < 1 || p > frame.grid.M || u < 1 || u > frame.dim || v < 1 || v > frame.dim) {
        throw DataError("periodogram index out of range");
    }
    return frame.J(u - 1, p - 1) * std::conj(frame.J(v - 1, p - 1));
}

}  // namespace fhawkes
