#include "qcsma/node_protocol.hpp"

#include <algorithm>
#include <string>

namespace qcsma {

NodeTopology NodeTopology::make(int nodes, const std::vector<std::pair<int, int>>& hearing_edges,
                                const std::vector<std::pair<int, int>>& links) {
    NodeTopology nt;
    nt.node_count = nodes;
    nt.hears.assign(nodes, std::vector<std::uint8_t>(nodes, 0));
    for (auto [a, b] : hearing_edges) {
        nt.hears[a][b] = 1;
        nt.hears[b][a] = 1;
    }
    nt.links = links;
    nt.validate();
    return nt;
}

void NodeTopology::validate() const {
    for (int a = 0; a < node_count; ++a) {
        if (hears[a][a]) throw TopologyError("node hears itself");
        for (int b = 0; b < node_count; ++b)
            if (hears[a][b] != hears[b][a])
                throw TopologyError("asymmetric hearing between nodes " + std::to_string(a + 1) +
                                    " and " + std::to_string(b + 1));
    }
    for (auto [s, r] : links) {
        if (s < 0 || r < 0 || s >= node_count || r >= node_count)
            throw TopologyError("link endpoint out of range");
        if (s == r) throw TopologyError("link sender equals receiver");
    }
}

ConflictGraph conflict_set_from_topology(const NodeTopology& nt) {
    nt.validate();
    const int n = int(nt.links.size());
    ConflictGraph g(n);
    for (int i = 0; i < n; ++i) {
        auto [si, ri] = nt.links[i];
        for (int j = i + 1; j < n; ++j) {
            auto [sj, rj] = nt.links[j];
            bool shares_node = si == sj || si == rj || ri == sj || ri == rj;
            bool conflict = shares_node || nt.can_hear(sj, ri) || nt.can_hear(rj, si) ||
                            nt.can_hear(si, rj) || nt.can_hear(ri, sj);
            if (conflict) g.add_conflict(i, j);
        }
    }
    g.check_invariants();
    return g;
}

NodeSlotResult node_qcsma_slot_forced(const NodeTopology& nt, int W, const QueueVector& q,
                                      const std::vector<double>& p, const NodeBits& prev_bits,
                                      const Schedule& prev_x,
                                      const std::vector<int>& chosen_link,
                                      const std::vector<int>& backoff,
                                      const std::vector<double>& activation_u,
                                      const ConflictGraph* conflicts) {
    const int nodes = nt.node_count;
    const int n_links = int(nt.links.size());
    if (int(q.size()) != n_links || int(p.size()) != n_links || int(activation_u.size()) != n_links ||
        prev_x.size() != n_links)
        throw DimensionError("per-link vector length mismatch");
    if (int(chosen_link.size()) != nodes || int(backoff.size()) != nodes)
        throw DimensionError("per-node vector length mismatch");

    NodeSlotResult out;
    out.decision = Schedule(n_links);
    out.x = prev_x;

    std::vector<std::uint8_t> as(nodes, 1), ar(nodes, 1);

    for (int s = 0; s < W; ++s) {
        // --- RTD sub-mini-slot ---
        std::vector<int> rtd_tx;
        for (int v = 0; v < nodes; ++v)
            if (chosen_link[v] >= 0 && backoff[v] == s && as[v]) rtd_tx.push_back(v);

        std::vector<std::uint8_t> ar_pre = ar;
        std::vector<int> repliers;          // receiver nodes sending CTD this mini-slot
        std::vector<int> replier_target;    // the sender each one answers

        for (int v : rtd_tx) as[v] = ar[v] = 0;  // transmitted, no longer available

        std::vector<bool> clean_at_receiver(rtd_tx.size(), false);
        for (int v = 0; v < nodes; ++v) {
            if (std::find(rtd_tx.begin(), rtd_tx.end(), v) != rtd_tx.end()) continue;  // half-duplex
            std::vector<int> heard;
            for (int u : rtd_tx)
                if (nt.can_hear(u, v)) heard.push_back(u);
            if (heard.empty()) continue;
            if (heard.size() == 1) {
                int u = heard[0];
                int intended = nt.links[chosen_link[u]].second;
                if (v == intended) {
                    if (ar_pre[v]) {
                        repliers.push_back(v);
                        replier_target.push_back(u);
                        clean_at_receiver[std::size_t(
                            std::find(rtd_tx.begin(), rtd_tx.end(), u) - rtd_tx.begin())] = true;
                    }
                } else {
                    ar[v] = 0;  // foreign RTD: unavailable as receiver
                }
            } else {
                ar[v] = 0;  // RTD collision
            }
        }
        for (std::size_t k = 0; k < rtd_tx.size(); ++k)
            out.events.push_back({s, NodeControlEvent::Phase::rtd, rtd_tx[k],
                                  nt.links[chosen_link[rtd_tx[k]]].second, !clean_at_receiver[k]});

        // --- CTD sub-mini-slot ---
        for (int v : repliers) as[v] = ar[v] = 0;

        std::vector<bool> ctd_clean(repliers.size(), false);
        for (int w = 0; w < nodes; ++w) {
            if (std::find(repliers.begin(), repliers.end(), w) != repliers.end()) continue;
            std::vector<int> heard;
            for (int v : repliers)
                if (nt.can_hear(v, w)) heard.push_back(v);
            if (heard.empty()) continue;
            if (heard.size() == 1) {
                int v = heard[0];
                std::size_t k = std::size_t(std::find(repliers.begin(), repliers.end(), v) -
                                            repliers.begin());
                if (w == replier_target[k]) {
                    out.decision.set(chosen_link[w], true);
                    ctd_clean[k] = true;
                } else {
                    as[w] = 0;  // foreign CTD: unavailable as sender
                }
            } else {
                as[w] = 0;  // CTD collision
            }
        }
        for (std::size_t k = 0; k < repliers.size(); ++k)
            out.events.push_back({s, NodeControlEvent::Phase::ctd, repliers[k],
                                  replier_target[k], !ctd_clean[k]});
    }

    // Activation decisions for the decision schedule; everyone else holds.
    for (int i = 0; i < n_links; ++i) {
        if (!out.decision.test(i)) continue;
        auto [sn, rn] = nt.links[i];
        bool no_conflict_active =
            prev_x.test(i) || (prev_bits.act[sn] == 0 && prev_bits.act[rn] == 0 &&
                               prev_bits.nr[sn] == 0 && prev_bits.ns[rn] == 0);
        out.x.set(i, no_conflict_active && activation_u[i] < p[i]);
    }

    ConflictGraph local = conflicts ? ConflictGraph(1) : conflict_set_from_topology(nt);
    const ConflictGraph& cg = conflicts ? *conflicts : local;
    if (!is_feasible(cg, out.decision))
        throw InternalConsistencyError("node decision schedule infeasible");
    if (!is_feasible(cg, out.x))
        throw InternalConsistencyError("node transmission schedule infeasible");

    // Data slot: active nodes transmit; the rest carrier-sense the data and
    // ACK periods separately.
    out.bits = NodeBits::zeros(nodes);
    for (int i = 0; i < n_links; ++i)
        if (out.x.test(i)) {
            out.bits.act[nt.links[i].first] = 1;
            out.bits.act[nt.links[i].second] = 1;
        }
    for (int v = 0; v < nodes; ++v) {
        if (out.bits.act[v]) continue;  // transmitting nodes do not sense
        for (int i = 0; i < n_links; ++i)
            if (out.x.test(i)) {
                if (nt.can_hear(nt.links[i].first, v)) out.bits.ns[v] = 1;
                if (nt.can_hear(nt.links[i].second, v)) out.bits.nr[v] = 1;
            }
    }
    return out;
}

NodeSlotResult node_qcsma_slot(const NodeTopology& nt, int W, const QueueVector& q,
                               const std::vector<double>& p, const NodeBits& prev_bits,
                               const Schedule& prev_x, Rng& rng, const ConflictGraph* conflicts) {
    const int nodes = nt.node_count;
    const int n_links = int(nt.links.size());

    std::vector<int> chosen(nodes, -1);
    for (int v = 0; v < nodes; ++v) {
        std::vector<int> candidates;
        for (int i = 0; i < n_links; ++i)
            if (nt.links[i].first == v && q[i] > 0) candidates.push_back(i);
        if (!candidates.empty())
            chosen[v] = candidates[uniform_below(rng, candidates.size())];
    }
    std::vector<int> T(nodes, 0);
    for (int v = 0; v < nodes; ++v) T[v] = int(uniform_below(rng, std::uint64_t(W)));
    std::vector<double> u(n_links);
    for (int i = 0; i < n_links; ++i) u[i] = uniform_unit(rng);

    return node_qcsma_slot_forced(nt, W, q, p, prev_bits, prev_x, chosen, T, u, conflicts);
}

namespace {

std::vector<int> run_scenario(const NodeTopology& nt, const std::vector<int>& node_of_link,
                              const std::vector<int>& labels, const std::vector<int>& backoffs) {
    const int n_links = int(nt.links.size());
    std::vector<int> chosen(nt.node_count, -1), T(nt.node_count, 0);
    for (int i = 0; i < n_links; ++i) {
        chosen[node_of_link[i]] = i;
        T[node_of_link[i]] = backoffs[i];
    }
    QueueVector q(n_links, 1);
    std::vector<double> p(n_links, 0.5), u(n_links, 0.0);
    NodeSlotResult r = node_qcsma_slot_forced(nt, *std::max_element(backoffs.begin(), backoffs.end()) + 1,
                                              q, p, NodeBits::zeros(nt.node_count),
                                              Schedule(n_links), chosen, T, u);
    std::vector<int> out;
    for (int i = 0; i < n_links; ++i)
        if (r.decision.test(i)) out.push_back(labels[i]);
    return out;
}

}  // namespace

std::vector<int> scenario_hidden_terminal(int t1, int t2) {
    // S1(0) -- R1(1) -- S2(2) -- R2(3): only R1 hears the foreign sender S2.
    NodeTopology nt = NodeTopology::make(4, {{0, 1}, {1, 2}, {2, 3}}, {{0, 1}, {2, 3}});
    return run_scenario(nt, {0, 2}, {1, 2}, {t1, t2});
}

std::vector<int> scenario_exposed_terminal(int t1, int t3) {
    // R1(0) -- S1(1) -- S3(2) -- R3(3): the senders hear each other, the
    // receivers are out of range of the foreign sender.
    NodeTopology nt = NodeTopology::make(4, {{0, 1}, {1, 2}, {2, 3}}, {{1, 0}, {2, 3}});
    return run_scenario(nt, {1, 2}, {1, 3}, {t1, t3});
}

}  // namespace qcsma
