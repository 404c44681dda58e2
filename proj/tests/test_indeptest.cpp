#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fhawkes/harness.hpp"
#include "fhawkes/indeptest.hpp"
#include "oracles.hpp"

using namespace fhawkes;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// univariate frame whose periodogram equals a chosen function of omega
FourierFrame synthetic_frame(double T, int M, const std::function<double(double)>& y) {
    FourierFrame frame;
    frame.grid = FourierGrid{T, M};
    frame.dim = 1;
    frame.J = Eigen::MatrixXcd::Zero(1, M);
    for (int p = 1; p <= M; ++p) frame.J(0, p - 1) = std::sqrt(y(frame.grid.omega(p)));
    return frame;
}

HawkesModel diagonal_bivariate() {
    HawkesModel m;
    m.mu = Eigen::VectorXd::Constant(2, 1.0);
    m.nu = Eigen::MatrixXd::Zero(2, 2);
    m.nu(0, 0) = 0.5;
    m.nu(1, 1) = 0.5;
    m.kernels.assign(2, std::vector<KernelSpec>(2, KernelSpec::mittag_leffler(0.9, 1.0)));
    return m;
}

double sample_sd(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
}

}  // namespace

TEST_CASE("weight kernels are symmetric, nonnegative, and named") {
    for (const WeightKernel& k : {WeightKernel::flat(), WeightKernel::epanechnikov()}) {
        for (double x = 0.0; x <= 1.0; x += 0.125) {
            CHECK(k.K(x) >= 0.0);
            CHECK(k.K(-x) == doctest::Approx(k.K(x)).epsilon(1e-14));
        }
    }
    CHECK(WeightKernel::flat().K(0.3) == 1.0);
    CHECK(WeightKernel::epanechnikov().K(0.0) == 0.75);
    CHECK(WeightKernel::epanechnikov().K(1.0) == 0.0);
    CHECK(make_weight_kernel("flat").name == "flat");
    CHECK(make_weight_kernel("epanechnikov").name == "epanechnikov");
    CHECK_THROWS_AS(make_weight_kernel("triangle"), ConfigError);
}

TEST_CASE("intercepts of exact linear-in-omega-squared data") {
    const double T = 50.0;
    const int M = 40;
    const FourierFrame constant = synthetic_frame(T, M, [](double) { return 1.7; });
    CHECK(std::abs(intercept_estimates(constant, M, WeightKernel::flat())(0, 0) - 1.7) < 1e-12);

    const FourierFrame quadratic =
        synthetic_frame(T, M, [](double w) { return 2.0 + 3.0 * w * w; });
    for (const WeightKernel& k : {WeightKernel::flat(), WeightKernel::epanechnikov()}) {
        CHECK(std::abs(intercept_estimates(quadratic, M, k)(0, 0) - 2.0) < 1e-10);
    }

    CHECK_THROWS_AS(intercept_estimates(quadratic, 2, WeightKernel::flat()), ConfigError);
    CHECK_THROWS_AS(intercept_estimates(quadratic, M + 1, WeightKernel::flat()), ConfigError);
}

TEST_CASE("flat-kernel intercepts coincide with ordinary least squares") {
    SimConfig cfg;
    cfg.T = 300.0;
    cfg.seed = 5150;
    const EventLog log = simulate_hawkes(diagonal_bivariate(), cfg);
    const int M = 120;
    const FourierFrame frame = finite_fourier(log, FourierGrid{log.horizon, M});
    const Eigen::MatrixXd phi = intercept_estimates(frame, M, WeightKernel::flat());

    Eigen::MatrixXd X(M, 2);
    for (int p = 1; p <= M; ++p) {
        X(p - 1, 0) = 1.0;
        X(p - 1, 1) = frame.grid.omega(p) * frame.grid.omega(p);
    }
    for (int u = 1; u <= 2; ++u) {
        for (int v = u; v <= 2; ++v) {
            Eigen::VectorXd y(M);
            for (int p = 1; p <= M; ++p) y(p - 1) = periodogram_cross(frame, p, u, v).real();
            const Eigen::Vector2d beta = (X.transpose() * X).ldlt().solve(X.transpose() * y);
            CHECK(std::abs(phi(u - 1, v - 1) - beta(0)) < 1e-10);
        }
    }
    CHECK(phi(0, 1) == phi(1, 0));
}

TEST_CASE("kernel normalization constants") {
    CHECK(std::abs(kernel_constant(WeightKernel::flat()) - 2.25) < 1e-10);

    // degree-0 homogeneity: scaling the kernel leaves the constant unchanged
    WeightKernel doubled;
    doubled.name = "doubled-flat";
    doubled.K = [](double) { return 2.0; };
    CHECK(std::abs(kernel_constant(doubled) - 2.25) < 1e-10);

    // Epanechnikov: H0=1/2, H2=1/10, H4=3/70; cross-check the defining
    // integral with a dense composite Simpson rule
    const double h0 = 0.5, h2 = 0.1, h4 = 3.0 / 70.0;
    const double denom = h4 * h0 - h2 * h2;
    auto integrand = [&](double x) {
        const double kx = 0.75 * (1.0 - x * x);
        const double g = (h4 - h2 * x * x) * kx / denom;
        return g * g;
    };
    const int n = 10000;  // even
    const double h = 1.0 / n;
    double simpson = integrand(0.0) + integrand(1.0);
    for (int i = 1; i < n; ++i) simpson += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * h);
    simpson *= h / 3.0;
    CHECK(std::abs(kernel_constant(WeightKernel::epanechnikov()) - simpson) < 1e-8);
}

TEST_CASE("statistic assembly from intercepts") {
    Eigen::MatrixXd diag_only(2, 2);
    diag_only << 2.0, 0.0, 0.0, 3.0;
    CHECK(independence_statistic(diag_only, 100, 2.25) == 0.0);

    Eigen::MatrixXd phi(2, 2);
    phi << 2.0, 0.1, 0.1, 3.0;
    const double want = 100.0 * (8.0 / 9.0) * (0.01 / 6.0);
    CHECK(std::abs(independence_statistic(phi, 100, 2.25) - want) < 1e-12);
    CHECK(std::abs(independence_statistic(3.7 * phi, 100, 2.25) - want) < 1e-12);

    Eigen::MatrixXd bad = phi;
    bad(1, 1) = 0.0;
    CHECK_THROWS_AS(independence_statistic(bad, 100, 2.25), DataError);
}

TEST_CASE("chi-square survival function") {
    CHECK(chi_square_sf(0.0, 1) == 1.0);
    CHECK(std::abs(chi_square_sf(3.841459, 1) - 0.05) < 1e-5);
    // k = 2 has the closed form exp(-x/2)
    CHECK(std::abs(chi_square_sf(5.991465, 2) - std::exp(-5.991465 / 2.0)) < 1e-12);
    CHECK(std::abs(chi_square_sf(5.991465, 2) - 0.05) < 1e-5);
    double prev = 1.0;
    for (double x = 0.5; x < 20.0; x += 0.5) {
        const double s = chi_square_sf(x, 3);
        CHECK(s < prev);
        prev = s;
    }
}

TEST_CASE("merged independent processes give uniform p-values") {
    HawkesModel uni;
    uni.mu = Eigen::VectorXd::Constant(1, 1.0);
    uni.nu = Eigen::MatrixXd::Constant(1, 1, 0.5);
    uni.kernels = {{KernelSpec::mittag_leffler(0.9, 1.0)}};

    const double T = 5000.0;
    const int reps = 200;
    std::vector<double> pvals;
    pvals.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        SimConfig cfg;
        cfg.T = T;
        cfg.seed = Rng::mix(4242, static_cast<std::uint64_t>(2 * r));
        const EventLog first = simulate_hawkes(uni, cfg);
        cfg.seed = Rng::mix(4242, static_cast<std::uint64_t>(2 * r + 1));
        const EventLog second = simulate_hawkes(uni, cfg);

        EventLog merged;
        merged.horizon = T;
        merged.dim = 2;
        for (const Event& e : first.events) merged.events.push_back({e.time, 1});
        for (const Event& e : second.events) merged.events.push_back({e.time, 2});
        std::sort(merged.events.begin(), merged.events.end(),
                  [](const Event& a, const Event& b) { return a.time < b.time; });

        pvals.push_back(run_independence_test(merged).p_value);
    }
    const double ks = oracles::ks_statistic(pvals, [](double x) { return x; });
    CHECK(ks < oracles::ks_critical_1pct(pvals.size()));
}

TEST_CASE("univariate logs are rejected by the test pipeline") {
    SimConfig cfg;
    cfg.T = 100.0;
    cfg.seed = 1;
    HawkesModel uni;
    uni.mu = Eigen::VectorXd::Constant(1, 1.0);
    uni.nu = Eigen::MatrixXd::Zero(1, 1);
    uni.kernels = {{KernelSpec::exponential(1.0)}};
    const EventLog log = simulate_hawkes(uni, cfg);
    CHECK_THROWS_AS(run_independence_test(log), DataError);
}

TEST_CASE("report fields are internally consistent") {
    SimConfig cfg;
    cfg.T = 2000.0;
    cfg.seed = 88;
    const EventLog log = simulate_hawkes(diagonal_bivariate(), cfg);
    const IndependenceReport rep = run_independence_test(log);
    CHECK(rep.M_T == resolve_mt(MTRule::TenSqrtT, 0, 2000.0));
    CHECK(rep.delta_T == doctest::Approx(rep.M_T / 2000.0).epsilon(1e-14));
    CHECK(std::abs(rep.c_K - 2.25) < 1e-10);
    CHECK(rep.kernel_name == "flat");
    CHECK(rep.df == 1);
    CHECK(rep.phi_hat(0, 1) == rep.phi_hat(1, 0));
    const double want = independence_statistic(rep.phi_hat, rep.M_T, rep.c_K);
    CHECK(rep.statistic == doctest::Approx(want).epsilon(1e-12));
    CHECK(rep.p_value == doctest::Approx(chi_square_sf(rep.statistic, 1)).epsilon(1e-12));
}

TEST_CASE("replication mean of the diagonal intercept matches its population value") {
    // on a finite band the WLS intercept targets the best (1, omega^2) fit of
    // the true spectrum, which sits below f11(0) by the quadratic-truncation
    // bias; compute that population intercept on the same grid and require
    // the Monte Carlo mean to land on it, and the bias to shrink with the band
    const HawkesModel m = fh6_model(0.0, 0.0);
    const double T = 5000.0;
    const int M = resolve_mt(MTRule::TenSqrtT, 0, T);
    const FourierGrid grid{T, M};

    auto population_intercept = [&](int m_used) {
        double s0 = 0.0, s2 = 0.0, s4 = 0.0, b0 = 0.0, b2 = 0.0;
        for (int p = 1; p <= m_used; ++p) {
            const double w2 = grid.omega(p) * grid.omega(p);
            const double f = bartlett_spectral_matrix(m, grid.omega(p)).values(0, 0).real();
            s0 += 1.0;
            s2 += w2;
            s4 += w2 * w2;
            b0 += f;
            b2 += f * w2;
        }
        return (s4 * b0 - s2 * b2) / (s0 * s4 - s2 * s2);
    };
    const double f0 = bartlett_spectral_matrix(m, 0.0).values(0, 0).real();
    const double limit_full = population_intercept(M);
    const double limit_half = population_intercept(M / 2);
    CHECK(std::abs(limit_half - f0) < std::abs(limit_full - f0));

    double mean = 0.0;
    const int reps = 100;
    for (int r = 0; r < reps; ++r) {
        SimConfig cfg;
        cfg.T = T;
        cfg.seed = Rng::mix(6000, static_cast<std::uint64_t>(r));
        const EventLog log = simulate_hawkes(m, cfg);
        const FourierFrame frame = finite_fourier(log, FourierGrid{T, M});
        mean += intercept_estimates(frame, M, WeightKernel::flat())(0, 0);
    }
    mean /= reps;
    CHECK(std::abs(mean - limit_full) / limit_full < 0.02);
}

TEST_CASE("cross-intercept spread shrinks like the square root of the frequency count") {
    const HawkesModel m = diagonal_bivariate();
    const double T = 2000.0;
    const std::vector<int> ms = {static_cast<int>(5.0 * std::sqrt(T)),
                                 static_cast<int>(10.0 * std::sqrt(T)),
                                 static_cast<int>(20.0 * std::sqrt(T))};
    const int reps = 150;
    std::vector<std::vector<double>> phi12(ms.size());
    for (int r = 0; r < reps; ++r) {
        SimConfig cfg;
        cfg.T = T;
        cfg.seed = Rng::mix(31002, static_cast<std::uint64_t>(r));
        const EventLog log = simulate_hawkes(m, cfg);
        const FourierFrame frame = finite_fourier(log, FourierGrid{T, ms.back()});
        for (std::size_t k = 0; k < ms.size(); ++k) {
            phi12[k].push_back(intercept_estimates(frame, ms[k], WeightKernel::flat())(0, 1));
        }
    }
    for (std::size_t k = 0; k < ms.size(); ++k) {
        double mean = 0.0;
        for (double v : phi12[k]) mean += v;
        mean /= reps;
        const double se = sample_sd(phi12[k]) / std::sqrt(static_cast<double>(reps));
        CHECK(std::abs(mean) < 4.0 * se);  // cross-intercepts center on zero
    }
    for (std::size_t k = 0; k + 1 < ms.size(); ++k) {
        const double ratio = sample_sd(phi12[k]) / sample_sd(phi12[k + 1]);
        const double want = std::sqrt(static_cast<double>(ms[k + 1]) / ms[k]);
        CHECK(std::abs(ratio - want) / want < 0.30);
    }
}

TEST_CASE("zero-frequency cross-density of the symmetric family") {
    for (double a : {0.0, 0.1, 0.2, 0.3}) {
        for (double b : {0.0, 0.1, 0.2, 0.3}) {
            if (a * b >= 0.25) continue;
            const double closed =
                (a * b / 2.0 + (a + b) / 8.0) / std::pow(0.25 - a * b, 3.0);
            const std::complex<double> f12 =
                bartlett_spectral_matrix(fh6_model(a, b), 0.0).values(0, 1);
            CHECK(std::abs(f12.real() - closed) < 1e-10);
            CHECK(std::abs(f12.imag()) < 1e-10);
            CHECK(std::abs(fh6_f12_zero(a, b) - closed) < 1e-10);
        }
    }
    // strictly increasing in the first interaction weight
    for (double b : {0.0, 0.1, 0.2, 0.3}) {
        double prev = -1.0;
        for (double a : {0.0, 0.1, 0.2, 0.3}) {
            const double cur = fh6_f12_zero(a, b);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("diagonal interaction recovery from diagonal covariance data") {
    // for diagonal D and Lambda with Lambda_ii <= D_ii, the unique
    // nonnegative nu with spectral radius < 1 solving
    // (I-nu)^{-1} Lambda (I-nu)^{-T} = D is nu = I - Lambda^{1/2} D^{-1/2}
    Rng rng(90210);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + static_cast<int>(rng.uniform() * 3.0);
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(d, d);
        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < d; ++i) {
            D(i, i) = 0.5 + 4.0 * rng.uniform();
            L(i, i) = D(i, i) * (0.05 + 0.95 * rng.uniform());
        }
        Eigen::MatrixXd nu = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < d; ++i) nu(i, i) = 1.0 - std::sqrt(L(i, i) / D(i, i));
        CHECK(spectral_radius(nu) < 1.0);
        CHECK(nu.minCoeff() >= 0.0);
        const Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(d, d) - nu).inverse();
        CHECK((inv * L * inv.transpose() - D).cwiseAbs().maxCoeff() < 1e-10);
    }
}
