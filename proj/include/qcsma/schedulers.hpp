#ifndef QCSMA_SCHEDULERS_HPP
#define QCSMA_SCHEDULERS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcsma/conflict_graph.hpp"
#include "qcsma/contention.hpp"
#include "qcsma/core.hpp"

namespace qcsma {

// ---------------------------------------------------------------------------
// Weights and activation probabilities
// ---------------------------------------------------------------------------

enum class WeightKind { linear, log_scaled, loglog };

/// Queue-to-weight map. All kinds are nondecreasing, continuous and unbounded
/// in q; log_scaled is -infinity at q = 0, which the activation map turns
/// into "never self-activate".
struct WeightFunction {
    WeightKind kind = WeightKind::log_scaled;
    double alpha = 0.1;

    double operator()(long long q) const;
    bool operator==(const WeightFunction&) const = default;
};

/// Logistic activation probability exp(w)/(exp(w)+1). Finite weights are
/// clamped into [p_min, 1-p_min]; w = -infinity maps to exactly 0 (a link
/// with an empty queue under log_scaled weights never turns itself on).
double activation_probability(double w, double p_min);

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class Algorithm { qcsma, dgms, dms, hybrid, gms, mws, cyclic };

std::string algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(std::string_view s);

struct SchedulerConfig {
    Algorithm algorithm = Algorithm::qcsma;
    int W = 48;        // Q-CSMA / D-MS contention window
    int B = 3;         // D-GMS frame count
    double b = 8.0;    // D-GMS log base
    int W1 = 16;       // D-GMS frame width (hybrid carries its own value here)
    int W0 = 5;        // hybrid Q-CSMA window
    double q0 = 100.0; // hybrid queue threshold; may be infinity
    WeightFunction weight{};
    double p_min = 1e-6;

    void validate() const;  // throws DomainError on out-of-range parameters
    bool operator==(const SchedulerConfig&) const = default;
};

/// Everything one control+data slot produced: the decision schedule where the
/// algorithm defines one, the transmission schedule, the realized backoff
/// mini-slots (kSilent for links that sat out), and the control-message log.
struct SlotOutcome {
    bool has_decision = false;
    Schedule decision;
    Schedule x;
    std::vector<int> backoffs;
    std::vector<ControlEvent> events;
};

std::vector<double> link_weights(const WeightFunction& f, const QueueVector& q);
std::vector<double> activation_probabilities(const SchedulerConfig& cfg, const QueueVector& q);

// ---------------------------------------------------------------------------
// Q-CSMA
// ---------------------------------------------------------------------------
// Per-slot randomness is consumed in a fixed order (backoffs for links
// 0..n-1, then activation uniforms for links 0..n-1) so seeded runs are
// bit-reproducible; the *_forced variants take those draws verbatim, which is
// how tests pin down deterministic control-slot outcomes.

SlotOutcome qcsma_step_forced(const ConflictGraph& g, const std::vector<double>& probs,
                              const Schedule& x_prev, const std::vector<int>& backoffs,
                              const std::vector<double>& activation_u);

SlotOutcome qcsma_step_probs(const ConflictGraph& g, int W, const std::vector<double>& probs,
                             const Schedule& x_prev, Rng& rng);

SlotOutcome qcsma_step(const ConflictGraph& g, const SchedulerConfig& cfg, const QueueVector& q,
                       const Schedule& x_prev, Rng& rng);

// ---------------------------------------------------------------------------
// D-GMS / D-MS
// ---------------------------------------------------------------------------

/// Frame index floor(B - log_b(q+1)) clamped at 0, computed by an exact
/// integer ceiling-log so floating error cannot shift frame boundaries.
/// Equals B exactly when q = 0 (the link stays out of the control window).
int dgms_frame(long long q, int B, double b);

/// Raw backoff mini-slot offset + W1*frame + Uniform[0, W1-1]; for q = 0 the
/// result lands past the W1*B-slot control window.
int dgms_backoff(long long q, int B, double b, int W1, int offset, Rng& rng);

/// RESV contention over externally supplied backoffs: winners transmit,
/// everyone else is off. Shared by D-GMS, D-MS and tests that force T.
SlotOutcome resv_step_forced(const ConflictGraph& g, const std::vector<int>& T);

SlotOutcome dgms_step(const ConflictGraph& g, const SchedulerConfig& cfg, const QueueVector& q,
                      Rng& rng);

SlotOutcome dms_step(const ConflictGraph& g, int W, const QueueVector& q, Rng& rng);

// ---------------------------------------------------------------------------
// Hybrid Q-CSMA
// ---------------------------------------------------------------------------

struct HybridLinkState {
    std::uint8_t na = 0;             // conflicting link activated by the CSMA phase
    std::uint8_t phase2_active = 0;  // this link's last activity came from the D-GMS phase
};

struct HybridOutcome {
    SlotOutcome slot;
    std::vector<HybridLinkState> state;
};

/// One hybrid slot: links with q > q0 run Q-CSMA over mini-slots [0, W0-1]
/// gated by their NA bits; every such link that ends up transmitting
/// announces RESV in the transition mini-slot W0; the remaining links run
/// D-GMS over frames starting at W0+1 unless that announcement silenced them.
/// A link that was scheduled by the D-GMS phase and crosses the threshold
/// while still holding its transmission drops it instead of carrying it into
/// the CSMA phase unannounced-by-NA; see the phase2_active bit.
HybridOutcome hybrid_step(const ConflictGraph& g, const SchedulerConfig& cfg,
                          const QueueVector& q, const Schedule& x_prev,
                          const std::vector<HybridLinkState>& prev, Rng& rng);

HybridOutcome hybrid_step_forced(const ConflictGraph& g, const SchedulerConfig& cfg,
                                 const QueueVector& q, const Schedule& x_prev,
                                 const std::vector<HybridLinkState>& prev,
                                 const std::vector<int>& csma_backoffs,
                                 const std::vector<double>& activation_u,
                                 const std::vector<int>& frame_u);

/// Control-slot length in mini-slots: W0 + 1 + W1*B.
int hybrid_control_slot_length(const SchedulerConfig& cfg);

// ---------------------------------------------------------------------------
// Centralized baselines and the ring reference policy
// ---------------------------------------------------------------------------

/// Greedy maximal scheduling: repeatedly take the nonempty link with the
/// longest queue (lowest id on ties) and disable its conflict set.
Schedule gms_step(const ConflictGraph& g, const QueueVector& q);

/// Exhaustive maximum-weight schedule; ties resolve to the first schedule in
/// enumeration order.
Schedule mws_step(const ConflictGraph& g, const std::vector<double>& weights,
                  int cap = kDefaultEnumerationCap);

/// Deterministic period-3 rotation through {1,4,7}, {2,5,8}, {3,6,9} on the
/// 9-link ring; slot indices are 1-based.
Schedule cyclic_reference_step(long long t);

}  // namespace qcsma

#endif  // QCSMA_SCHEDULERS_HPP
