#include "qcsma/sim_engine.hpp"

#include <cmath>

namespace qcsma {

void ExperimentConfig::validate() const {
    if (horizon < 1) throw DomainError("horizon must be >= 1");
    if (runs < 1) throw DomainError("runs must be >= 1");
    if (record_interval < 1) throw DomainError("record interval must be >= 1");
    scheduler.validate();
}

SlopeFit stability_slope(const std::vector<SlotTracePoint>& trace, double s_min) {
    // Fit on the second half of the recorded horizon.
    if (trace.empty()) throw DomainError("empty trace");
    long long t_end = trace.back().t;
    std::vector<const SlotTracePoint*> pts;
    for (const auto& p : trace)
        if (2 * p.t > t_end) pts.push_back(&p);
    if (pts.size() < 100)
        throw DomainError("stability fit needs >= 100 recorded points in the second half, got " +
                          std::to_string(pts.size()));

    double n = double(pts.size());
    double sx = 0, sy = 0;
    for (auto* p : pts) {
        sx += double(p->t);
        sy += p->mean_queue;
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto* p : pts) {
        double dx = double(p->t) - mx, dy = p->mean_queue - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    double ss_res = syy - fit.slope * sxy;
    fit.r2 = syy <= 1e-30 ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
    fit.unstable = fit.slope > s_min && fit.r2 > 0.9;
    return fit;
}

double overhead_adjusted_capacity(double D, double W) {
    if (D <= 0.0 || W < 0.0) throw DomainError("need D > 0 and W >= 0");
    return D / (D + W);
}

namespace {

/// Per-run scheduler state machine dispatching to the pure step functions.
class SchedulerDriver {
public:
    SchedulerDriver(const ConflictGraph& g, const SchedulerConfig& cfg)
        : g_(g), cfg_(cfg), x_(g.link_count()), hybrid_state_(g.link_count()) {}

    const Schedule& x() const { return x_; }

    const Schedule& step(long long t, const QueueVector& q, Rng& rng) {
        switch (cfg_.algorithm) {
            case Algorithm::qcsma:
                x_ = qcsma_step(g_, cfg_, q, x_, rng).x;
                break;
            case Algorithm::dgms:
                x_ = dgms_step(g_, cfg_, q, rng).x;
                break;
            case Algorithm::dms:
                x_ = dms_step(g_, cfg_.W, q, rng).x;
                break;
            case Algorithm::hybrid: {
                HybridOutcome h = hybrid_step(g_, cfg_, q, x_, hybrid_state_, rng);
                x_ = h.slot.x;
                hybrid_state_ = std::move(h.state);
                break;
            }
            case Algorithm::gms:
                x_ = gms_step(g_, q);
                break;
            case Algorithm::mws: {
                std::vector<double> w(q.begin(), q.end());
                x_ = mws_step(g_, w);
                break;
            }
            case Algorithm::cyclic:
                if (g_.link_count() != 9)
                    throw DomainError("the cyclic reference policy is defined on the 9-link ring");
                x_ = cyclic_reference_step(t);
                break;
        }
        if (!is_feasible(g_, x_))
            throw InternalConsistencyError("scheduler emitted an infeasible schedule");
        return x_;
    }

private:
    const ConflictGraph& g_;
    SchedulerConfig cfg_;
    Schedule x_;
    std::vector<HybridLinkState> hybrid_state_;
};

}  // namespace

Metrics run_experiment(const ConflictGraph& g, const ExperimentConfig& cfg) {
    return run_experiment(g, cfg, SlotObserver{});
}

namespace {

SlopeFit fit_or_default(const std::vector<SlotTracePoint>& trace) {
    try {
        return stability_slope(trace);
    } catch (const DomainError&) {
        return SlopeFit{};  // horizon too short for a verdict
    }
}

}  // namespace

Metrics run_experiment(const ConflictGraph& g, const ExperimentConfig& cfg,
                       const SlotObserver& observer) {
    cfg.validate();
    const int n = g.link_count();
    const ArrivalProcess arrivals{cfg.traffic};
    const RateVector rates = arrivals.mean_rates(n);  // per-slot rates for the Bernoulli kinds
    if (int(rates.size()) != n) throw DimensionError("traffic does not match the topology size");

    Metrics metrics;
    for (int run = 0; run < cfg.runs; ++run) {
        Rng rng(cfg.seed + std::uint64_t(run));
        SchedulerDriver driver(g, cfg.scheduler);
        QueueVector q(n, 0);

        RunResult rr;
        rr.seed = cfg.seed + std::uint64_t(run);
        double queue_time_sum = 0.0;

        for (long long t = 1; t <= cfg.horizon; ++t) {
            const Schedule& x = driver.step(t, q, rng);

            for (int i = 0; i < n; ++i)
                if (x.test(i) && q[i] > 0) q[i] -= 1;  // departures, dummy if empty

            long long total = 0;
            switch (cfg.traffic.kind) {
                case TrafficSpec::Kind::bernoulli_grid:
                case TrafficSpec::Kind::bernoulli:
                    for (int i = 0; i < n; ++i)
                        if (uniform_unit(rng) < rates[i]) q[i] += 1;
                    break;
                case TrafficSpec::Kind::ring_adversarial: {
                    auto a = ring_arrivals(t, cfg.traffic.eps, rng);
                    for (int i = 0; i < n; ++i) q[i] += a[i];
                    break;
                }
                case TrafficSpec::Kind::poisson: {
                    auto a = poisson_arrivals(rates, rng);
                    for (int i = 0; i < n; ++i) q[i] += a[i];
                    break;
                }
            }
            for (int i = 0; i < n; ++i) total += q[i];

            double mean_q = double(total) / double(n);
            queue_time_sum += mean_q;
            if (t % cfg.record_interval == 0 || t == cfg.horizon)
                rr.trace.push_back({t, mean_q, x.count()});
            if (observer) observer(t, x, q);
        }

        rr.avg_queue = queue_time_sum / double(cfg.horizon);
        rr.fit = fit_or_default(rr.trace);
        metrics.runs.push_back(std::move(rr));
    }

    double mean = 0.0;
    for (const auto& r : metrics.runs) mean += r.avg_queue;
    mean /= double(metrics.runs.size());
    double var = 0.0;
    for (const auto& r : metrics.runs) var += (r.avg_queue - mean) * (r.avg_queue - mean);
    metrics.avg_queue_mean = mean;
    metrics.avg_queue_stddev =
        metrics.runs.size() > 1 ? std::sqrt(var / double(metrics.runs.size() - 1)) : 0.0;
    return metrics;
}

}  // namespace qcsma
