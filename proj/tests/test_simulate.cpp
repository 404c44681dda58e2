#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fhawkes/simulate.hpp"
#include "oracles.hpp"

using namespace fhawkes;

namespace {

HawkesModel univariate_model(double mu, double nu, const KernelSpec& k) {
    HawkesModel m;
    m.mu = Eigen::VectorXd::Constant(1, mu);
    m.nu = Eigen::MatrixXd::Constant(1, 1, nu);
    m.kernels = {{k}};
    return m;
}

HawkesModel fh4_model() { return univariate_model(1.0, 0.5, KernelSpec::mittag_leffler(0.9, 1.0)); }

HawkesModel diagonal_bivariate() {
    HawkesModel m;
    m.mu = Eigen::VectorXd::Constant(2, 1.0);
    m.nu = Eigen::MatrixXd::Zero(2, 2);
    m.nu(0, 0) = 0.5;
    m.nu(1, 1) = 0.5;
    m.kernels.assign(2, std::vector<KernelSpec>(2, KernelSpec::mittag_leffler(0.9, 1.0)));
    return m;
}

std::vector<double> inter_event_times(const std::vector<Event>& events, int mark) {
    std::vector<double> gaps;
    double prev = -1.0;
    for (const Event& e : events) {
        if (e.mark != mark) continue;
        if (prev >= 0.0) gaps.push_back(e.time - prev);
        prev = e.time;
    }
    return gaps;
}

void check_well_formed(const EventLog& log) {
    double prev = -1.0;
    for (const Event& e : log.events) {
        CHECK(e.time >= 0.0);
        CHECK(e.time < log.horizon);
        CHECK(e.time > prev);
        CHECK(e.mark >= 1);
        CHECK(e.mark <= log.dim);
        prev = e.time;
    }
}

}  // namespace

TEST_CASE("no excitation reduces to a Poisson process") {
    const HawkesModel m = univariate_model(2.0, 0.0, KernelSpec::exponential(1.0));
    SimConfig cfg;
    cfg.T = 1000.0;
    cfg.seed = 42;
    const EventLog log = simulate_hawkes(m, cfg);
    check_well_formed(log);
    CHECK(std::abs(static_cast<double>(log.events.size()) - 2000.0) < 3.0 * std::sqrt(2000.0));

    const std::vector<double> gaps = inter_event_times(log.events, 1);
    const double ks = oracles::ks_statistic(
        gaps, [](double x) { return 1.0 - std::exp(-2.0 * x); });
    CHECK(ks < oracles::ks_critical_1pct(gaps.size()));
}

TEST_CASE("replication-mean event count matches the stationary rate") {
    const HawkesModel m = fh4_model();
    double total = 0.0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        SimConfig cfg;
        cfg.T = 1000.0;
        cfg.burn_in = 1000.0;
        cfg.seed = Rng::mix(7, static_cast<std::uint64_t>(r));
        total += static_cast<double>(simulate_hawkes(m, cfg).events.size());
    }
    const double mean = total / reps;
    CHECK(std::abs(mean - 2000.0) / 2000.0 < 0.02);
}

TEST_CASE("per-mark rates of a bivariate model match the balance equation") {
    HawkesModel m;
    m.mu = Eigen::VectorXd(2);
    m.mu << 0.2, 0.1;
    m.nu = Eigen::MatrixXd(2, 2);
    m.nu << 0.3, 1.0, 0.5, 0.2;
    m.kernels = {{KernelSpec::mittag_leffler(0.75, 0.8), KernelSpec::mittag_leffler(0.85, 1.0)},
                 {KernelSpec::mittag_leffler(0.8, 0.9), KernelSpec::mittag_leffler(0.9, 1.1)}};
    const Eigen::VectorXd lambda = average_intensity(m);

    const int reps = 50;
    const double T = 2000.0;
    std::vector<double> rate1(reps), rate2(reps);
    for (int r = 0; r < reps; ++r) {
        SimConfig cfg;
        cfg.T = T;
        cfg.seed = Rng::mix(99, static_cast<std::uint64_t>(r));
        const EventLog log = simulate_hawkes(m, cfg);
        long n1 = 0;
        for (const Event& e : log.events) n1 += e.mark == 1 ? 1 : 0;
        rate1[r] = n1 / T;
        rate2[r] = (static_cast<long>(log.events.size()) - n1) / T;
    }
    for (int mark = 0; mark < 2; ++mark) {
        const std::vector<double>& rates = mark == 0 ? rate1 : rate2;
        double mean = 0.0;
        for (double v : rates) mean += v;
        mean /= reps;
        double var = 0.0;
        for (double v : rates) var += (v - mean) * (v - mean);
        var /= reps - 1;
        const double se = std::sqrt(var / reps);
        CHECK(std::abs(mean - lambda(mark)) < 3.0 * se + 0.01 * lambda(mark));
    }
}

TEST_CASE("fixed seeds reproduce the log exactly") {
    const HawkesModel m = fh4_model();
    SimConfig cfg;
    cfg.T = 500.0;
    cfg.seed = 12345;
    const EventLog a = simulate_hawkes(m, cfg);
    const EventLog b = simulate_hawkes(m, cfg);
    CHECK(a == b);
    cfg.seed = 12346;
    CHECK(!(a == simulate_hawkes(m, cfg)));
}

TEST_CASE("cluster generation obeys the branching-process mean") {
    const HawkesModel none = univariate_model(1.0, 0.0, KernelSpec::exponential(1.0));
    Rng rng(1);
    CHECK(sample_cluster(0.0, 1, none, rng).empty());

    const HawkesModel half = univariate_model(1.0, 0.5, KernelSpec::mittag_leffler(0.8, 1.0));
    Rng rng2(2);
    const int reps = 100000;
    double total = 0.0;
    for (int r = 0; r < reps; ++r) {
        total += static_cast<double>(sample_cluster(0.0, 1, half, rng2).size());
    }
    const double mean = total / reps;
    // mean progeny nu/(1-nu) = 1, progeny variance nu/(1-nu)^3 = 4
    const double se = 2.0 / std::sqrt(static_cast<double>(reps));
    CHECK(std::abs(mean - 1.0) < 3.0 * se);

    // no cross-excitation paths: a mark-1 root spawns only mark-1 children
    const HawkesModel diag = diagonal_bivariate();
    Rng rng3(3);
    for (int r = 0; r < 2000; ++r) {
        for (const Event& e : sample_cluster(0.0, 1, diag, rng3)) CHECK(e.mark == 1);
    }
}

TEST_CASE("guards trip on budget exhaustion and invalid models") {
    const HawkesModel hot = univariate_model(5.0, 0.9, KernelSpec::exponential(1.0));
    SimConfig cfg;
    cfg.T = 1000.0;
    cfg.seed = 4;
    cfg.max_events = 200;
    CHECK_THROWS_AS(simulate_hawkes(hot, cfg), GuardError);

    const HawkesModel critical = univariate_model(1.0, 1.0, KernelSpec::exponential(1.0));
    SimConfig ok;
    ok.T = 10.0;
    ok.seed = 5;
    CHECK_THROWS_AS(simulate_hawkes(critical, ok), NonstationaryError);

    SimConfig bad;
    bad.T = -1.0;
    bad.seed = 6;
    CHECK_THROWS_AS(simulate_hawkes(fh4_model(), bad), ConfigError);

    // depth guard: near-critical branching exceeds a tiny generation cap
    Rng rng(8);
    bool tripped = false;
    for (int r = 0; r < 500 && !tripped; ++r) {
        try {
            sample_cluster(0.0, 1, hot, rng, /*max_generations=*/3);
        } catch (const GuardError&) {
            tripped = true;
        }
    }
    CHECK(tripped);
}

TEST_CASE("doubling the burn-in leaves the mean count unchanged for light tails") {
    const HawkesModel m = fh4_model();
    const double T = 800.0;
    const int reps = 1500;
    double sum_short = 0.0, sum_long = 0.0;
    for (int r = 0; r < reps; ++r) {
        SimConfig cfg;
        cfg.T = T;
        cfg.seed = Rng::mix(555, static_cast<std::uint64_t>(r));
        cfg.burn_in = T;
        sum_short += static_cast<double>(simulate_hawkes(m, cfg).events.size());
        cfg.burn_in = 2.0 * T;
        sum_long += static_cast<double>(simulate_hawkes(m, cfg).events.size());
    }
    CHECK(std::abs(sum_short - sum_long) / sum_long < 0.005);
}

TEST_CASE("diagonal interactions make the marks behave like independent processes") {
    SimConfig cfg;
    cfg.T = 4000.0;
    cfg.seed = 77;
    const EventLog joint = simulate_hawkes(diagonal_bivariate(), cfg);
    check_well_formed(joint);

    const HawkesModel uni = univariate_model(1.0, 0.5, KernelSpec::mittag_leffler(0.9, 1.0));
    SimConfig cfg2;
    cfg2.T = 4000.0;
    cfg2.seed = 78;
    const EventLog solo = simulate_hawkes(uni, cfg2);

    const std::vector<double> joint_gaps = inter_event_times(joint.events, 1);
    const std::vector<double> solo_gaps = inter_event_times(solo.events, 1);
    const double ks = oracles::two_sample_ks(joint_gaps, solo_gaps);
    CHECK(ks < oracles::two_sample_ks_critical_1pct(joint_gaps.size(), solo_gaps.size()));
}

TEST_CASE("events from pre-zero immigrants are retained") {
    // with a long-memory kernel and no background noise after 0 the only
    // way events appear early in [0, T) is via burn-in ancestry
    const HawkesModel m = univariate_model(1.0, 0.6, KernelSpec::mittag_leffler(0.5, 1.0));
    int with_early = 0;
    for (int r = 0; r < 20; ++r) {
        SimConfig cfg;
        cfg.T = 50.0;
        cfg.burn_in = 50.0;
        cfg.seed = Rng::mix(31337, static_cast<std::uint64_t>(r));
        const EventLog log = simulate_hawkes(m, cfg);
        if (!log.events.empty() && log.events.front().time < 0.5) ++with_early;
    }
    CHECK(with_early > 10);

    // zero burn-in produces a different (deterministic) log
    SimConfig a;
    a.T = 200.0;
    a.seed = 9;
    a.burn_in = 0.0;
    SimConfig b = a;
    b.burn_in = 200.0;
    CHECK(!(simulate_hawkes(m, a) == simulate_hawkes(m, b)));
}
