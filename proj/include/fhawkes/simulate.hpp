#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fhawkes/model.hpp"
#include "fhawkes/rng.hpp"

namespace fhawkes {

struct Event {
    double time;
    int mark;  // 1-based

    bool operator==(const Event&) const = default;
};

/// A finite realization on [0, horizon): events sorted by strictly
/// increasing time, marks in 1..dim.
struct EventLog {
    double horizon = 0.0;
    int dim = 0;
    std::vector<Event> events;
    long ties_jittered = 0;  // exact ties broken by a 2^-40 nudge

    bool operator==(const EventLog& o) const {
        return horizon == o.horizon && dim == o.dim && events == o.events;
    }
};

struct SimConfig {
    double T = 0.0;
    double burn_in = -1.0;  // immigrants on (-burn_in, T); negative means "use T"
    std::uint64_t seed = 0;
    std::size_t max_events = 50'000'000;
    int max_generations = 100'000;
};

/// All descendants (root excluded) of an immigrant at (root_time, root_mark),
/// generated breadth-first: a parent of mark j spawns, for each mark i, a
/// Poisson(nu_ij) number of children delayed by draws from kernel g_ij.
std::vector<Event> sample_cluster(double root_time, int root_mark, const HawkesModel& m, Rng& rng,
                                  int max_generations = 100'000,
                                  std::size_t max_events = 50'000'000);

/// Cluster-representation simulation: Poisson immigrants with intensity mu_i
/// on (-B, T), each spawning an independent cluster; events outside [0, T)
/// are dropped. Deterministic given (m, cfg).
EventLog simulate_hawkes(const HawkesModel& m, const SimConfig& cfg);

}  // namespace fhawkes
