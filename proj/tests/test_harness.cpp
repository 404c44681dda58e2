#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fhawkes/harness.hpp"

using namespace fhawkes;

TEST_CASE("relative error accumulates componentwise") {
    Eigen::VectorXd theta0(4);
    theta0 << 1.0, 0.5, 0.9, 1.0;
    CHECK(relative_error(theta0, theta0) == 0.0);
    CHECK(relative_error((2.0 * theta0).eval(), theta0) == doctest::Approx(4.0).epsilon(1e-14));

    Eigen::VectorXd theta_hat(4);
    theta_hat << 1.1, 0.45, 0.95, 1.2;
    const double want = 0.1 + 0.1 + 0.05 / 0.9 + 0.2;
    CHECK(relative_error(theta_hat, theta0) == doctest::Approx(want).epsilon(1e-12));

    Eigen::VectorXd with_zero(2);
    with_zero << 1.0, 0.0;
    CHECK_THROWS_AS(relative_error(with_zero, with_zero), DataError);
    Eigen::VectorXd shorter(3);
    shorter << 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(relative_error(shorter, theta0), DataError);
}

TEST_CASE("median and interquartile range use interpolated quantiles") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK(median({7.0}) == 7.0);

    CHECK(interquartile_range({1.0, 2.0, 3.0, 4.0, 5.0}) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(interquartile_range({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(interquartile_range({5.0}) == 0.0);
}

TEST_CASE("worker pool covers every index once and propagates errors") {
    const int n = 101;
    for (int threads : {1, 4}) {
        std::vector<int> hits(n, 0);
        parallel_for(n, threads, [&](int i) { hits[i] += 1; });
        for (int i = 0; i < n; ++i) CHECK(hits[i] == 1);
    }

    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [&](int i) {
                                     if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("univariate presets pin the documented true parameters") {
    const double betas[4] = {0.4, 0.5, 0.6, 0.9};
    for (int k = 0; k < 4; ++k) {
        const ExperimentPreset p = make_preset("FH" + std::to_string(k + 1));
        CHECK(p.theta0.size() == 4);
        CHECK(p.theta0(0) == 1.0);
        CHECK(p.theta0(1) == 0.5);
        CHECK(p.theta0(2) == betas[k]);
        CHECK(p.theta0(3) == 1.0);
        CHECK(p.default_T == 1250.0);
        CHECK(p.mt_rule == MTRule::TLogT);
        CHECK(p.replications == 200);
        CHECK(p.model.mu(0) == 1.0);
        CHECK(p.model.nu(0, 0) == 0.5);
        CHECK(p.model.kernels[0][0].ml.beta == betas[k]);
    }
    const ExperimentPreset fh5 = make_preset("FH5");
    CHECK(fh5.theta0.size() == 14);
    CHECK(fh5.model.dim() == 2);
    CHECK((average_intensity(fh5.model) -
           fh5.par->spectral(fh5.theta0).lambda).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(make_preset("FH9"), ConfigError);

    const ExperimentPreset fh6 = fh6_preset(0.2, 0.1);
    CHECK(fh6.default_T == 5000.0);
    CHECK(fh6.mt_rule == MTRule::TenSqrtT);
    CHECK(fh6.model.nu(0, 1) == 0.2);
    CHECK(fh6.model.nu(1, 0) == 0.1);
    // the family is nonstationary once the cross product reaches 1/4
    CHECK_THROWS_AS(average_intensity(fh6_model(0.6, 0.5)), NonstationaryError);
}

TEST_CASE("replication runs are deterministic and thread-count independent") {
    ExperimentPreset preset;
    preset.name = "poisson-check";
    preset.par = make_parameterization("poisson");
    preset.theta0 = Eigen::VectorXd::Constant(1, 2.0);
    preset.model.mu = Eigen::VectorXd::Constant(1, 2.0);
    preset.model.nu = Eigen::MatrixXd::Zero(1, 1);
    preset.model.kernels = {{KernelSpec::exponential(1.0)}};

    const auto one = run_fit_replications(preset, "whittle", 300.0, MTRule::TenSqrtT, 8, 42, 1);
    const auto four = run_fit_replications(preset, "whittle", 300.0, MTRule::TenSqrtT, 8, 42, 4);
    REQUIRE(one.size() == 8);
    REQUIRE(four.size() == 8);
    for (int r = 0; r < 8; ++r) {
        CHECK(one[r].ok);
        CHECK(one[r].value == four[r].value);
        CHECK(one[r].value < 0.5);  // rate estimate lands near the truth
    }

    const SummaryRow row = summarize(preset, "whittle", 300.0, MTRule::TenSqrtT, one);
    CHECK(row.preset == "poisson-check");
    CHECK(row.estimator == "whittle");
    CHECK(row.replications == 8);
    CHECK(row.failures == 0);
    CHECK(row.mt_rule == "10sqrt");
}

TEST_CASE("summaries aggregate values and count failures") {
    ExperimentPreset preset;
    preset.name = "manual";
    std::vector<ReplicationOutcome> outcomes(5);
    const double vals[4] = {0.4, 0.1, 0.3, 0.2};
    for (int i = 0; i < 4; ++i) {
        outcomes[i].ok = true;
        outcomes[i].value = vals[i];
    }
    outcomes[4].ok = false;
    outcomes[4].error = "did not converge";
    const SummaryRow row = summarize(preset, "mle", 100.0, MTRule::Fixed, outcomes);
    CHECK(row.failures == 1);
    CHECK(row.replications == 5);
    CHECK(row.median_value == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(row.iqr == doctest::Approx(interquartile_range({0.4, 0.1, 0.3, 0.2})).epsilon(1e-14));

    std::vector<ReplicationOutcome> all_bad(3);
    CHECK_THROWS_AS(summarize(preset, "mle", 100.0, MTRule::Fixed, all_bad), DataError);
}

TEST_CASE("dependent interaction grids are flagged by the rejection experiment") {
    const RejectionResult strong = run_rejection_experiment(0.3, 0.3, 3000.0, 10, 7, 1, 0.05);
    CHECK(strong.replications == 10);
    CHECK(strong.failures == 0);
    CHECK(strong.rate >= 0.8);
    CHECK(strong.rate == doctest::Approx(strong.rejections / 10.0).epsilon(1e-14));

    const RejectionResult again = run_rejection_experiment(0.3, 0.3, 3000.0, 10, 7, 3, 0.05);
    CHECK(again.rejections == strong.rejections);
}

TEST_CASE("tables are deterministic text with pinned headers") {
    ExperimentPreset preset;
    preset.name = "FH4";
    std::vector<ReplicationOutcome> outcomes(3);
    for (int i = 0; i < 3; ++i) {
        outcomes[i].ok = true;
        outcomes[i].value = 0.1 * (i + 1);
        outcomes[i].seconds = 0.5 + i;  // wall time must stay out of the summary table
    }
    const SummaryRow row = summarize(preset, "whittle", 1250.0, MTRule::TLogT, outcomes);
    const std::string table = format_summary_table({row});
    CHECK(table.find("preset,estimator,T,mt_rule,reps,failures,median_rel_error,iqr") !=
          std::string::npos);
    CHECK(table.find("FH4,whittle") != std::string::npos);
    CHECK(table.find("0.5") == std::string::npos);
    CHECK(table == format_summary_table({row}));

    const std::string timing = format_timing_table({row});
    CHECK(timing.find("median_seconds") != std::string::npos);

    RejectionResult cell;
    cell.a = 0.1;
    cell.b = 0.2;
    cell.replications = 100;
    cell.rejections = 37;
    cell.rate = 0.37;
    const std::string rej = format_rejection_table({cell});
    CHECK(rej.find("a,b,reps,failures,rejections,rate") != std::string::npos);
    CHECK(rej.find("0.37") != std::string::npos);
}
