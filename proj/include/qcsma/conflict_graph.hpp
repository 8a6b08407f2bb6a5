#ifndef QCSMA_CONFLICT_GRAPH_HPP
#define QCSMA_CONFLICT_GRAPH_HPP

#include <utility>
#include <vector>

#include "qcsma/core.hpp"

namespace qcsma {

/// Interference structure over the links of a network: for each link i the
/// set C(i) of links that cannot transmit at the same time as i. Symmetric
/// and irreflexive by construction; immutable once built, safe to share
/// across threads.
class ConflictGraph {
public:
    explicit ConflictGraph(int link_count);

    int link_count() const { return n_; }

    /// Register a mutual conflict between 0-based links i and j.
    void add_conflict(int i, int j);

    const std::vector<int>& conflicts(int i) const { return adj_[i]; }
    const Schedule& conflict_mask(int i) const { return mask_[i]; }
    bool in_conflict(int i, int j) const { return mask_[i].test(j); }

    /// Links conflicting with anything in s: union of C(i) over i in s.
    Schedule conflict_neighborhood(const Schedule& s) const;

    /// Throws InternalConsistencyError when symmetry or irreflexivity fails.
    void check_invariants() const;

private:
    int n_;
    std::vector<std::vector<int>> adj_;
    std::vector<Schedule> mask_;
};

/// Undirected node graph used by the k-hop conflict builder. Nodes are
/// 1-based in the public fields, matching the link and topology-file ids.
struct NodeGraph {
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;  // 1-based node pairs
};

constexpr int kDefaultEnumerationCap = 24;

bool is_feasible(const ConflictGraph& g, const Schedule& x);

/// All feasible schedules, ascending in the Schedule ordering (empty set
/// first). Throws EnumerationCapError when link_count exceeds the cap.
std::vector<Schedule> enumerate_feasible(const ConflictGraph& g,
                                         int cap = kDefaultEnumerationCap);

bool is_maximal(const ConflictGraph& g, const Schedule& x);

/// Feasible schedules to which no link can be added, same ordering and cap.
std::vector<Schedule> enumerate_maximal(const ConflictGraph& g,
                                        int cap = kDefaultEnumerationCap);

/// Conflict graph for directed links over a node graph: links conflict when
/// they share a node or when some pair of their endpoints is within k-1 hops
/// (so k=1 is the node-exclusive matching constraint and k=2 additionally
/// silences links one hop apart).
ConflictGraph build_khop_conflicts(const NodeGraph& nodes,
                                   const std::vector<std::pair<int, int>>& links,
                                   int k);

/// Chain of n links sharing consecutive nodes (1-hop interference).
ConflictGraph path_conflicts(int n_links);

/// n-link cycle under k-hop interference: link i conflicts with i+-1..i+-k.
ConflictGraph ring_conflicts(int n_links, int k);

/// 9-link ring; the two experiments use k=2.
ConflictGraph ring9(int k = 2);

/// 4x4 grid, 16 nodes, 24 links, 1-hop interference. Labeling: horizontal
/// links of row r come before the verticals between rows r and r+1; row 1
/// holds links 1-3, verticals 4-7, row 2 holds 8-10, verticals 11-14, row 3
/// holds 15-17, verticals 18-21, row 4 holds 22-24.
ConflictGraph grid24();

/// The four maximum-size maximal schedules of grid24 used to build traffic.
const std::vector<std::vector<int>>& grid24_maximal_sets();

}  // namespace qcsma

#endif  // QCSMA_CONFLICT_GRAPH_HPP
