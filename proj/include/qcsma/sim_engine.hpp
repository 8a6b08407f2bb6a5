#ifndef QCSMA_SIM_ENGINE_HPP
#define QCSMA_SIM_ENGINE_HPP

#include <functional>
#include <string>
#include <vector>

#include "qcsma/conflict_graph.hpp"
#include "qcsma/core.hpp"
#include "qcsma/schedulers.hpp"
#include "qcsma/traffic.hpp"

namespace qcsma {

struct ExperimentConfig {
    std::string topology_name = "grid24";
    SchedulerConfig scheduler{};
    TrafficSpec traffic{};
    long long horizon = 100000;
    int runs = 10;
    std::uint64_t seed = 1;
    long long record_interval = 100;

    void validate() const;
};

struct SlotTracePoint {
    long long t;
    double mean_queue;   // mean over links at the end of the slot
    int schedule_size;
};

struct SlopeFit {
    double slope = 0.0;
    double r2 = 0.0;
    bool unstable = false;
};

struct RunResult {
    std::uint64_t seed;
    double avg_queue;  // time average of the per-slot mean queue
    SlopeFit fit;
    std::vector<SlotTracePoint> trace;
};

struct Metrics {
    std::vector<RunResult> runs;
    double avg_queue_mean = 0.0;   // across-run mean of per-run time averages
    double avg_queue_stddev = 0.0;
};

/// Default instability threshold: least-squares slope of the mean queue over
/// the second half of the horizon, in packets per slot.
constexpr double kDefaultSlopeMin = 1e-3;

/// Least-squares slope over the second half of the recorded trace. The run
/// counts as unstable when the slope exceeds s_min with fit quality R^2
/// above 0.9. Requires at least 100 points in the second half.
SlopeFit stability_slope(const std::vector<SlotTracePoint>& trace, double s_min = kDefaultSlopeMin);

/// Fraction of the capacity region left after spending W control mini-slots
/// per D data mini-slots: D / (D + W).
double overhead_adjusted_capacity(double D, double W);

/// Run `runs` independent experiments of `horizon` slots each. Per slot:
/// queues are observed, the scheduler produces x(t) from x(t-1), departures
/// remove min(1, q_i) per scheduled link, then arrivals append. Queues and
/// the schedule start empty. Run r uses an RNG seeded with seed + r, so a
/// config and seed pin the results exactly.
Metrics run_experiment(const ConflictGraph& g, const ExperimentConfig& cfg);

/// Hook for callers that want per-slot access (oracle tests); invoked after
/// departures and arrivals of every slot.
using SlotObserver = std::function<void(long long t, const Schedule& x, const QueueVector& q)>;

Metrics run_experiment(const ConflictGraph& g, const ExperimentConfig& cfg,
                       const SlotObserver& observer);

}  // namespace qcsma

#endif  // QCSMA_SIM_ENGINE_HPP
