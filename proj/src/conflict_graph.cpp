#include "qcsma/conflict_graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

namespace qcsma {

ConflictGraph::ConflictGraph(int link_count) : n_(link_count), adj_(link_count) {
    if (link_count <= 0) throw DomainError("link count must be positive");
    mask_.assign(link_count, Schedule(link_count));
}

void ConflictGraph::add_conflict(int i, int j) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
        throw DimensionError("conflict pair out of range");
    if (i == j) throw TopologyError("link " + std::to_string(i + 1) + " conflicts with itself");
    if (mask_[i].test(j)) return;
    adj_[i].push_back(j);
    adj_[j].push_back(i);
    std::sort(adj_[i].begin(), adj_[i].end());
    std::sort(adj_[j].begin(), adj_[j].end());
    mask_[i].set(j, true);
    mask_[j].set(i, true);
}

Schedule ConflictGraph::conflict_neighborhood(const Schedule& s) const {
    Schedule out(n_);
    for (int i = 0; i < n_; ++i)
        if (s.test(i)) out = out | mask_[i];
    return out;
}

void ConflictGraph::check_invariants() const {
    for (int i = 0; i < n_; ++i) {
        if (mask_[i].test(i)) throw InternalConsistencyError("self-conflict at link " + std::to_string(i + 1));
        for (int j : adj_[i])
            if (!mask_[j].test(i))
                throw InternalConsistencyError("asymmetric conflict " + std::to_string(i + 1) + "," +
                                               std::to_string(j + 1));
    }
}

bool is_feasible(const ConflictGraph& g, const Schedule& x) {
    if (x.size() != g.link_count())
        throw DimensionError("schedule has " + std::to_string(x.size()) + " links, graph has " +
                             std::to_string(g.link_count()));
    for (int i = 0; i < g.link_count(); ++i)
        if (x.test(i) && x.intersects(g.conflict_mask(i))) return false;
    return true;
}

namespace {

void check_cap(const ConflictGraph& g, int cap) {
    if (g.link_count() > cap)
        throw EnumerationCapError("enumeration over " + std::to_string(g.link_count()) +
                                  " links exceeds cap " + std::to_string(cap));
}

// Decide links from the highest index down, taking the 0-branch first, so
// schedules come out in ascending bitset order with the empty set first.
void enumerate_rec(const ConflictGraph& g, int next, Schedule& acc, Schedule& blocked,
                   std::vector<Schedule>& out) {
    if (next < 0) {
        out.push_back(acc);
        return;
    }
    enumerate_rec(g, next - 1, acc, blocked, out);
    if (!blocked.test(next)) {
        acc.set(next, true);
        Schedule saved = blocked;
        blocked = blocked | g.conflict_mask(next);
        enumerate_rec(g, next - 1, acc, blocked, out);
        blocked = saved;
        acc.set(next, false);
    }
}

}  // namespace

std::vector<Schedule> enumerate_feasible(const ConflictGraph& g, int cap) {
    check_cap(g, cap);
    std::vector<Schedule> out;
    Schedule acc(g.link_count()), blocked(g.link_count());
    enumerate_rec(g, g.link_count() - 1, acc, blocked, out);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_maximal(const ConflictGraph& g, const Schedule& x) {
    if (!is_feasible(g, x)) return false;
    Schedule closed = x | g.conflict_neighborhood(x);
    for (int j = 0; j < g.link_count(); ++j)
        if (!closed.test(j)) return false;  // j could be added
    return true;
}

std::vector<Schedule> enumerate_maximal(const ConflictGraph& g, int cap) {
    std::vector<Schedule> out;
    for (const Schedule& x : enumerate_feasible(g, cap))
        if (is_maximal(g, x)) out.push_back(x);
    return out;
}

namespace {

std::vector<std::vector<int>> node_adjacency(const NodeGraph& nodes) {
    std::vector<std::vector<int>> adj(nodes.node_count);
    for (auto [u, v] : nodes.edges) {
        if (u < 1 || v < 1 || u > nodes.node_count || v > nodes.node_count)
            throw TopologyError("edge endpoint out of range");
        adj[u - 1].push_back(v - 1);
        adj[v - 1].push_back(u - 1);
    }
    return adj;
}

std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int src) {
    std::vector<int> dist(adj.size(), -1);
    std::queue<int> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
    }
    return dist;
}

}  // namespace

ConflictGraph build_khop_conflicts(const NodeGraph& nodes,
                                   const std::vector<std::pair<int, int>>& links, int k) {
    if (k < 1) throw DomainError("hop count must be >= 1");
    for (auto [u, v] : links)
        if (u < 1 || v < 1 || u > nodes.node_count || v > nodes.node_count)
            throw TopologyError("link endpoint " + std::to_string(std::max(u, v)) +
                                " not in node graph of size " + std::to_string(nodes.node_count));
    auto adj = node_adjacency(nodes);
    std::vector<std::vector<int>> dist(nodes.node_count);
    for (int u = 0; u < nodes.node_count; ++u) dist[u] = bfs_distances(adj, u);

    auto endpoint_distance = [&](int a, int b) {
        auto [ua, va] = links[a];
        auto [ub, vb] = links[b];
        int best = -1;
        for (int p : {ua - 1, va - 1})
            for (int q : {ub - 1, vb - 1}) {
                int d = dist[p][q];
                if (d >= 0 && (best < 0 || d < best)) best = d;
            }
        return best;  // -1 when disconnected
    };

    ConflictGraph g(int(links.size()));
    for (int i = 0; i < int(links.size()); ++i)
        for (int j = i + 1; j < int(links.size()); ++j) {
            int d = endpoint_distance(i, j);
            if (d >= 0 && d <= k - 1) g.add_conflict(i, j);
        }
    g.check_invariants();
    return g;
}

ConflictGraph path_conflicts(int n_links) {
    NodeGraph nodes;
    nodes.node_count = n_links + 1;
    std::vector<std::pair<int, int>> links;
    for (int i = 1; i <= n_links; ++i) {
        nodes.edges.push_back({i, i + 1});
        links.push_back({i, i + 1});
    }
    return build_khop_conflicts(nodes, links, 1);
}

ConflictGraph ring_conflicts(int n_links, int k) {
    NodeGraph nodes;
    nodes.node_count = n_links;
    std::vector<std::pair<int, int>> links;
    for (int i = 1; i <= n_links; ++i) {
        int j = i % n_links + 1;
        nodes.edges.push_back({i, j});
        links.push_back({i, j});
    }
    return build_khop_conflicts(nodes, links, k);
}

ConflictGraph ring9(int k) { return ring_conflicts(9, k); }

const std::vector<std::vector<int>>& grid24_maximal_sets() {
    static const std::vector<std::vector<int>> sets = {
        {1, 3, 8, 10, 15, 17, 22, 24},
        {4, 5, 6, 7, 18, 19, 20, 21},
        {1, 3, 9, 11, 14, 16, 22, 24},
        {2, 4, 7, 12, 13, 18, 21, 23},
    };
    return sets;
}

ConflictGraph grid24() {
    constexpr int rows = 4, cols = 4;
    auto node_id = [](int r, int c) { return r * cols + c + 1; };

    NodeGraph nodes;
    nodes.node_count = rows * cols;
    std::vector<std::pair<int, int>> links;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c + 1 < cols; ++c) links.push_back({node_id(r, c), node_id(r, c + 1)});
        if (r + 1 < rows)
            for (int c = 0; c < cols; ++c) links.push_back({node_id(r, c), node_id(r + 1, c)});
    }
    nodes.edges = links;
    ConflictGraph g = build_khop_conflicts(nodes, links, 1);

    // The four reference sets must come out as feasible maximal schedules
    // under this labeling; the experiments depend on it.
    for (const auto& ids : grid24_maximal_sets()) {
        Schedule s = Schedule::from_links1(g.link_count(), ids);
        if (!is_feasible(g, s) || !is_maximal(g, s))
            throw InternalConsistencyError("grid24 reference schedule " + s.to_string() +
                                           " is not feasible-maximal");
    }
    return g;
}

}  // namespace qcsma
