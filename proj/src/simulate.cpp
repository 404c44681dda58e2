#include "fhawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "fhawkes/errors.hpp"

namespace fhawkes {

namespace {

struct PendingParent {
    double time;
    int mark;  // 1-based
    int generation;
};

void spawn_children(const PendingParent& parent, const HawkesModel& m, Rng& rng,
                    std::vector<Event>* out, std::deque<PendingParent>* frontier,
                    int max_generations, std::size_t max_events) {
    if (parent.generation >= max_generations) {
        throw GuardError("cluster generation depth guard exceeded");
    }
    const int d = m.dim();
    const int j = parent.mark - 1;
    for (int i = 0; i < d; ++i) {
        const double weight = m.nu(i, j);
        if (weight == 0.0) continue;
        const int n = rng.poisson(weight);
        for (int k = 0; k < n; ++k) {
            const double delay = m.kernels[i][j].sample(rng);
            Event child{parent.time + delay, i + 1};
            out->push_back(child);
            if (out->size() > max_events) {
                throw GuardError("cluster event budget exceeded (near-critical nu?)");
            }
            frontier->push_back(PendingParent{child.time, child.mark, parent.generation + 1});
        }
    }
}

}  // namespace

std::vector<Event> sample_cluster(double root_time, int root_mark, const HawkesModel& m, Rng& rng,
                                  int max_generations, std::size_t max_events) {
    m.validate();
    std::vector<Event> out;
    std::deque<PendingParent> frontier;
    frontier.push_back(PendingParent{root_time, root_mark, 0});
    while (!frontier.empty()) {
        PendingParent parent = frontier.front();
        frontier.pop_front();
        spawn_children(parent, m, rng, &out, &frontier, max_generations, max_events);
    }
    return out;
}

EventLog simulate_hawkes(const HawkesModel& m, const SimConfig& cfg) {
    m.validate();
    if (!(cfg.T > 0.0)) throw ConfigError("simulation horizon must be positive");
    if (spectral_radius(m.nu) >= 1.0) {
        throw NonstationaryError("nonstationary model: spectral radius of nu is >= 1");
    }
    const double burn_in = cfg.burn_in < 0.0 ? cfg.T : cfg.burn_in;
    const int d = m.dim();

    Rng rng(cfg.seed);
    std::vector<Event> kept;
    std::deque<PendingParent> frontier;

    // Immigrants per mark on (-B, T), each followed by its full cluster.
    for (int i = 0; i < d; ++i) {
        double t = -burn_in;
        for (;;) {
            t += rng.exponential(m.mu(i));
            if (t >= cfg.T) break;
            if (t >= 0.0) kept.push_back(Event{t, i + 1});
            if (kept.size() > cfg.max_events) {
                throw GuardError("simulation event budget exceeded");
            }
            frontier.clear();
            frontier.push_back(PendingParent{t, i + 1, 0});
            std::vector<Event> descendants;
            while (!frontier.empty()) {
                PendingParent parent = frontier.front();
                frontier.pop_front();
                spawn_children(parent, m, rng, &descendants, &frontier, cfg.max_generations,
                               cfg.max_events);
            }
            for (const Event& e : descendants) {
                if (e.time >= 0.0 && e.time < cfg.T) {
                    kept.push_back(e);
                    if (kept.size() > cfg.max_events) {
                        throw GuardError("simulation event budget exceeded");
                    }
                }
            }
        }
    }

    std::sort(kept.begin(), kept.end(),
              [](const Event& a, const Event& b) { return a.time < b.time; });

    EventLog log;
    log.horizon = cfg.T;
    log.dim = d;
    // Exact ties are a probability-zero event; nudge rather than abort so
    // the strict-ordering invariant holds.
    constexpr double kJitter = 9.094947017729282e-13;  // 2^-40
    for (std::size_t k = 0; k < kept.size(); ++k) {
        if (!log.events.empty() && kept[k].time <= log.events.back().time) {
            kept[k].time = log.events.back().time + kJitter;
            ++log.ties_jittered;
            if (kept[k].time >= cfg.T) continue;  // nudged past the horizon
        }
        log.events.push_back(kept[k]);
    }
    return log;
}

}  // namespace fhawkes
