#include "qcsma/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcsma {

double WeightFunction::operator()(long long q) const {
    switch (kind) {
        case WeightKind::linear:
            return alpha * double(q);
        case WeightKind::log_scaled:
            if (q == 0) return -std::numeric_limits<double>::infinity();
            return std::log(alpha * double(q));
        case WeightKind::loglog:
            return std::log(std::log(double(q) + std::exp(1.0)));
    }
    return 0.0;
}

double activation_probability(double w, double p_min) {
    if (w == -std::numeric_limits<double>::infinity()) return 0.0;
    double p = 1.0 / (1.0 + std::exp(-w));
    return std::clamp(p, p_min, 1.0 - p_min);
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::qcsma: return "qcsma";
        case Algorithm::dgms: return "dgms";
        case Algorithm::dms: return "dms";
        case Algorithm::hybrid: return "hybrid";
        case Algorithm::gms: return "gms";
        case Algorithm::mws: return "mws";
        case Algorithm::cyclic: return "cyclic";
    }
    return "?";
}

std::optional<Algorithm> algorithm_from_name(std::string_view s) {
    for (Algorithm a : {Algorithm::qcsma, Algorithm::dgms, Algorithm::dms, Algorithm::hybrid,
                        Algorithm::gms, Algorithm::mws, Algorithm::cyclic})
        if (s == algorithm_name(a)) return a;
    return std::nullopt;
}

void SchedulerConfig::validate() const {
    if (p_min < 0.0 || p_min >= 0.5) throw DomainError("p_min must be in [0, 0.5)");
    switch (algorithm) {
        case Algorithm::qcsma:
            if (W < 2) throw DomainError("Q-CSMA needs W >= 2 to cover every link");
            break;
        case Algorithm::dms:
            if (W < 1) throw DomainError("D-MS needs W >= 1");
            break;
        case Algorithm::dgms:
            if (B < 1 || W1 < 1 || !(b > 1.0)) throw DomainError("D-GMS needs B >= 1, W1 >= 1, b > 1");
            break;
        case Algorithm::hybrid:
            if (W0 < 2) throw DomainError("hybrid needs W0 >= 2");
            if (B < 1 || W1 < 1 || !(b > 1.0)) throw DomainError("hybrid needs B >= 1, W1 >= 1, b > 1");
            break;
        default:
            break;
    }
}

std::vector<double> link_weights(const WeightFunction& f, const QueueVector& q) {
    std::vector<double> w(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) w[i] = f(q[i]);
    return w;
}

std::vector<double> activation_probabilities(const SchedulerConfig& cfg, const QueueVector& q) {
    std::vector<double> p(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        p[i] = activation_probability(cfg.weight(q[i]), cfg.p_min);
    return p;
}

namespace {

void require_feasible(const ConflictGraph& g, const Schedule& x, const char* what) {
    if (!is_feasible(g, x)) throw InternalConsistencyError(std::string(what) + " is infeasible");
}

}  // namespace

// ---------------------------------------------------------------------------
// Q-CSMA
// ---------------------------------------------------------------------------

SlotOutcome qcsma_step_forced(const ConflictGraph& g, const std::vector<double>& probs,
                              const Schedule& x_prev, const std::vector<int>& backoffs,
                              const std::vector<double>& activation_u) {
    const int n = g.link_count();
    if (!is_feasible(g, x_prev)) throw DomainError("previous schedule is infeasible");
    if (int(probs.size()) != n || int(backoffs.size()) != n || int(activation_u.size()) != n)
        throw DimensionError("per-link vector length mismatch");

    ContentionOutcome c = resolve_contention(g, backoffs, ControlEvent::Kind::intent);

    SlotOutcome out;
    out.has_decision = true;
    out.decision = c.winners;
    out.backoffs = backoffs;
    out.events = std::move(c.events);
    out.x = Schedule(n);
    for (int i = 0; i < n; ++i) {
        if (out.decision.test(i)) {
            bool conflict_was_active = x_prev.intersects(g.conflict_mask(i));
            out.x.set(i, !conflict_was_active && activation_u[i] < probs[i]);
        } else {
            out.x.set(i, x_prev.test(i));
        }
    }
    require_feasible(g, out.decision, "decision schedule");
    require_feasible(g, out.x, "transmission schedule");
    return out;
}

SlotOutcome qcsma_step_probs(const ConflictGraph& g, int W, const std::vector<double>& probs,
                             const Schedule& x_prev, Rng& rng) {
    const int n = g.link_count();
    std::vector<int> T(n);
    for (int i = 0; i < n; ++i) T[i] = int(uniform_below(rng, std::uint64_t(W)));
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = uniform_unit(rng);
    return qcsma_step_forced(g, probs, x_prev, T, u);
}

SlotOutcome qcsma_step(const ConflictGraph& g, const SchedulerConfig& cfg, const QueueVector& q,
                       const Schedule& x_prev, Rng& rng) {
    return qcsma_step_probs(g, cfg.W, activation_probabilities(cfg, q), x_prev, rng);
}

// ---------------------------------------------------------------------------
// D-GMS / D-MS
// ---------------------------------------------------------------------------

int dgms_frame(long long q, int B, double b) {
    // floor(B - log_b(q+1)) = B - ceil(log_b(q+1)); count b-fold growth steps
    // from 1 up to q+1 instead of dividing logarithms.
    double reach = 1.0;
    int e = 0;
    while (reach < double(q + 1) && e < B) {
        reach *= b;
        ++e;
    }
    if (reach < double(q + 1)) return 0;  // ceil exceeds B, clamp at frame 0
    return B - e;
}

int dgms_backoff(long long q, int B, double b, int W1, int offset, Rng& rng) {
    return offset + W1 * dgms_frame(q, B, b) + int(uniform_below(rng, std::uint64_t(W1)));
}

SlotOutcome resv_step_forced(const ConflictGraph& g, const std::vector<int>& T) {
    ContentionOutcome c = resolve_contention(g, T, ControlEvent::Kind::resv);
    SlotOutcome out;
    out.x = c.winners;
    out.backoffs = T;
    out.events = std::move(c.events);
    require_feasible(g, out.x, "transmission schedule");
    return out;
}

SlotOutcome dgms_step(const ConflictGraph& g, const SchedulerConfig& cfg, const QueueVector& q,
                      Rng& rng) {
    const int n = g.link_count();
    std::vector<int> T(n, kSilent);
    for (int i = 0; i < n; ++i) {
        int u = int(uniform_below(rng, std::uint64_t(cfg.W1)));
        int frame = dgms_frame(q[i], cfg.B, cfg.b);
        if (frame < cfg.B) T[i] = cfg.W1 * frame + u;  // frame == B: empty queue, silent
    }
    return resv_step_forced(g, T);
}

SlotOutcome dms_step(const ConflictGraph& g, int W, const QueueVector& q, Rng& rng) {
    const int n = g.link_count();
    std::vector<int> T(n, kSilent);
    for (int i = 0; i < n; ++i) {
        int u = int(uniform_below(rng, std::uint64_t(W)));
        if (q[i] > 0) T[i] = u;
    }
    return resv_step_forced(g, T);
}

// ---------------------------------------------------------------------------
// Hybrid Q-CSMA
// ---------------------------------------------------------------------------

int hybrid_control_slot_length(const SchedulerConfig& cfg) {
    return cfg.W0 + 1 + cfg.W1 * cfg.B;
}

HybridOutcome hybrid_step_forced(const ConflictGraph& g, const SchedulerConfig& cfg,
                                 const QueueVector& q, const Schedule& x_prev,
                                 const std::vector<HybridLinkState>& prev,
                                 const std::vector<int>& csma_backoffs,
                                 const std::vector<double>& activation_u,
                                 const std::vector<int>& frame_u) {
    const int n = g.link_count();
    if (!is_feasible(g, x_prev)) throw DomainError("previous schedule is infeasible");
    if (int(prev.size()) != n || int(csma_backoffs.size()) != n || int(activation_u.size()) != n ||
        int(frame_u.size()) != n)
        throw DimensionError("per-link vector length mismatch");

    std::vector<double> probs = activation_probabilities(cfg, q);
    Schedule in_csma(n);
    for (int i = 0; i < n; ++i)
        if (double(q[i]) > cfg.q0) in_csma.set(i, true);

    // CSMA phase over mini-slots [0, W0-1], restricted to the high-queue set.
    std::vector<int> T1(n, kSilent);
    for (int i = 0; i < n; ++i)
        if (in_csma.test(i)) T1[i] = csma_backoffs[i];
    ContentionOutcome c1 = resolve_contention(g, T1, ControlEvent::Kind::intent);

    SlotOutcome slot;
    slot.has_decision = true;
    slot.decision = c1.winners;
    slot.events = std::move(c1.events);
    slot.backoffs = T1;
    slot.x = Schedule(n);

    for (int i = 0; i < n; ++i) {
        if (!in_csma.test(i)) continue;
        if (slot.decision.test(i)) {
            slot.x.set(i, prev[i].na == 0 && activation_u[i] < probs[i]);
        } else if (x_prev.test(i)) {
            // Holding an active state. A link whose activity came from the
            // D-GMS phase has never announced it via NA; carrying it into
            // the CSMA phase could collide with a fresh activation, so it
            // is dropped for this slot and must recontend.
            slot.x.set(i, prev[i].phase2_active == 0);
        }
    }

    // Transition mini-slot W0: every transmitting CSMA-phase link announces.
    Schedule announced = slot.x;
    Schedule heard = g.conflict_neighborhood(announced);
    for (int i = 0; i < n; ++i)
        if (announced.test(i))
            slot.events.push_back({cfg.W0, i, ControlEvent::Kind::resv, false});

    // D-GMS phase for the rest, offset past the transition mini-slot,
    // suppressed for links the announcement silenced.
    std::vector<int> T2(n, kSilent);
    for (int i = 0; i < n; ++i) {
        if (in_csma.test(i) || heard.test(i)) continue;
        int frame = dgms_frame(q[i], cfg.B, cfg.b);
        if (frame < cfg.B) T2[i] = (cfg.W0 + 1) + cfg.W1 * frame + frame_u[i];
    }
    ContentionOutcome c2 = resolve_contention(g, T2, ControlEvent::Kind::resv);
    for (int i = 0; i < n; ++i) {
        if (c2.winners.test(i)) slot.x.set(i, true);
        if (T2[i] != kSilent) slot.backoffs[i] = T2[i];
    }
    for (auto& e : c2.events) slot.events.push_back(e);

    HybridOutcome out;
    out.state.resize(n);
    for (int i = 0; i < n; ++i) {
        if (in_csma.test(i))
            out.state[i].na = slot.x.test(i) ? 0 : (heard.test(i) ? 1 : 0);
        else
            out.state[i].na = heard.test(i) ? 1 : 0;
        out.state[i].phase2_active = !in_csma.test(i) && slot.x.test(i) ? 1 : 0;
    }
    require_feasible(g, slot.decision, "decision schedule");
    require_feasible(g, slot.x, "transmission schedule");
    out.slot = std::move(slot);
    return out;
}

HybridOutcome hybrid_step(const ConflictGraph& g, const SchedulerConfig& cfg,
                          const QueueVector& q, const Schedule& x_prev,
                          const std::vector<HybridLinkState>& prev, Rng& rng) {
    const int n = g.link_count();
    // Fixed draw order: CSMA backoffs for the high-queue links, their
    // activation uniforms, then frame uniforms for the rest, all in id order.
    std::vector<int> T0(n, 0);
    std::vector<double> u(n, 0.0);
    std::vector<int> u2(n, 0);
    for (int i = 0; i < n; ++i)
        if (double(q[i]) > cfg.q0) T0[i] = int(uniform_below(rng, std::uint64_t(cfg.W0)));
    for (int i = 0; i < n; ++i)
        if (double(q[i]) > cfg.q0) u[i] = uniform_unit(rng);
    for (int i = 0; i < n; ++i)
        if (!(double(q[i]) > cfg.q0)) u2[i] = int(uniform_below(rng, std::uint64_t(cfg.W1)));
    return hybrid_step_forced(g, cfg, q, x_prev, prev, T0, u, u2);
}

// ---------------------------------------------------------------------------
// Centralized baselines
// ---------------------------------------------------------------------------

Schedule gms_step(const ConflictGraph& g, const QueueVector& q) {
    const int n = g.link_count();
    Schedule out(n);
    Schedule removed(n);
    while (true) {
        int best = -1;
        for (int i = 0; i < n; ++i) {
            if (removed.test(i) || q[i] <= 0) continue;
            if (best < 0 || q[i] > q[best]) best = i;  // ties keep the lowest id
        }
        if (best < 0) break;
        out.set(best, true);
        removed.set(best, true);
        removed = removed | g.conflict_mask(best);
    }
    require_feasible(g, out, "greedy schedule");
    return out;
}

Schedule mws_step(const ConflictGraph& g, const std::vector<double>& weights, int cap) {
    if (int(weights.size()) != g.link_count()) throw DimensionError("weight vector length mismatch");
    auto states = enumerate_feasible(g, cap);
    int best = 0;
    double best_w = 0.0;  // empty schedule
    for (std::size_t s = 1; s < states.size(); ++s) {
        double w = 0.0;
        for (int i = 0; i < g.link_count(); ++i)
            if (states[s].test(i)) w += weights[i];
        if (w > best_w) {
            best_w = w;
            best = int(s);
        }
    }
    return states[best];
}

Schedule cyclic_reference_step(long long t) {
    static const std::vector<std::vector<int>> sets = {{1, 4, 7}, {2, 5, 8}, {3, 6, 9}};
    long long phase = (t - 1) % 3;
    if (phase < 0) phase += 3;
    return Schedule::from_links1(9, sets[std::size_t(phase)]);
}

}  // namespace qcsma
