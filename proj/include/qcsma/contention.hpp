#ifndef QCSMA_CONTENTION_HPP
#define QCSMA_CONTENTION_HPP

#include <vector>

#include "qcsma/conflict_graph.hpp"
#include "qcsma/core.hpp"

namespace qcsma {

/// One control message observed during the control slot of a step.
struct ControlEvent {
    enum class Kind { intent, resv };
    int mini_slot;
    int link;  // 0-based
    Kind kind;
    bool collided;
};

struct ContentionOutcome {
    Schedule winners;
    std::vector<ControlEvent> events;
};

/// Backoff contention shared by the INTENT and RESV control phases. T[i] is
/// the mini-slot at which link i intends to transmit, or kSilent for links
/// that sit this slot out. A link actually transmits at T[i] unless it heard
/// a transmission from its conflict set in an earlier mini-slot (collided
/// messages still occupy the channel and silence listeners). A transmitting
/// link wins when no conflicting link transmits in the same mini-slot. What
/// winning and losing mean for x(t) is up to the caller: INTENT losers hold
/// their previous state, RESV losers stay off.
constexpr int kSilent = -1;

ContentionOutcome resolve_contention(const ConflictGraph& g, const std::vector<int>& T,
                                     ControlEvent::Kind kind);

}  // namespace qcsma

#endif  // QCSMA_CONTENTION_HPP
