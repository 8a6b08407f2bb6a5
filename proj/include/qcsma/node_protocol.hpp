#ifndef QCSMA_NODE_PROTOCOL_HPP
#define QCSMA_NODE_PROTOCOL_HPP

#include <utility>
#include <vector>

#include "qcsma/conflict_graph.hpp"
#include "qcsma/core.hpp"
#include "qcsma/schedulers.hpp"

namespace qcsma {

/// Node-level network: symmetric hearing relation plus directed links, each
/// with a sender and a receiver node. Everything 0-based.
struct NodeTopology {
    int node_count = 0;
    std::vector<std::vector<std::uint8_t>> hears;    // hearing matrix
    std::vector<std::pair<int, int>> links;          // (sender, receiver)

    static NodeTopology make(int nodes, const std::vector<std::pair<int, int>>& hearing_edges,
                             const std::vector<std::pair<int, int>>& links);

    bool can_hear(int a, int b) const { return hears[a][b] != 0; }

    /// Throws TopologyError on asymmetric hearing or degenerate links.
    void validate() const;
};

/// Conflict set induced by synchronized data/ACK transmission: links sharing
/// a node, senders audible at the other receiver, receivers audible at the
/// other sender.
ConflictGraph conflict_set_from_topology(const NodeTopology& nt);

/// Per-node one-bit memories carried across slots.
struct NodeBits {
    std::vector<std::uint8_t> act, ns, nr;

    static NodeBits zeros(int nodes) {
        return NodeBits{std::vector<std::uint8_t>(nodes, 0), std::vector<std::uint8_t>(nodes, 0),
                        std::vector<std::uint8_t>(nodes, 0)};
    }
};

/// One control message of the RTD/CTD handshake.
struct NodeControlEvent {
    enum class Phase { rtd, ctd };
    int mini_slot;
    Phase phase;
    int transmitter;        // node
    int intended_receiver;  // node
    bool collided;          // not received cleanly at the intended receiver
};

struct NodeSlotResult {
    Schedule decision;
    Schedule x;
    std::vector<NodeControlEvent> events;
    NodeBits bits;  // carrier-sensing state after the data slot
};

/// One slot of node-based Q-CSMA, driven by explicit draws: the link each
/// sender contends for (-1 for none), its backoff mini-slot, and per-link
/// activation uniforms. The two sub-mini-slots of each control mini-slot
/// carry RTD and CTD; a node hearing a foreign or collided RTD stops being
/// available as a receiver, a node hearing a foreign or collided CTD stops
/// being available as a sender, and a link joins the decision schedule
/// exactly when its RTD/CTD pair went through cleanly. `conflicts` is the
/// graph from conflict_set_from_topology (pass it in when stepping in a
/// loop; recomputed when null) and is used to assert feasibility.
NodeSlotResult node_qcsma_slot_forced(const NodeTopology& nt, int W, const QueueVector& q,
                                      const std::vector<double>& p, const NodeBits& prev_bits,
                                      const Schedule& prev_x,
                                      const std::vector<int>& chosen_link,
                                      const std::vector<int>& backoff,
                                      const std::vector<double>& activation_u,
                                      const ConflictGraph* conflicts = nullptr);

/// RNG-driven slot: per sender, the contended link is uniform over its
/// nonempty-queue outgoing links; backoffs are uniform over [0, W-1].
NodeSlotResult node_qcsma_slot(const NodeTopology& nt, int W, const QueueVector& q,
                               const std::vector<double>& p, const NodeBits& prev_bits,
                               const Schedule& prev_x, Rng& rng,
                               const ConflictGraph* conflicts = nullptr);

/// Hidden-terminal layout: two sender/receiver pairs where only the first
/// receiver hears the second sender. Returns the decision schedule for the
/// given backoffs as 1-based labels {1, 2}.
std::vector<int> scenario_hidden_terminal(int t1, int t2);

/// Exposed-terminal layout: the two senders hear each other but neither
/// receiver hears the foreign sender. Labels {1, 3}.
std::vector<int> scenario_exposed_terminal(int t1, int t3);

}  // namespace qcsma

#endif  // QCSMA_NODE_PROTOCOL_HPP
