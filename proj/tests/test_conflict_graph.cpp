#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "qcsma/conflict_graph.hpp"

using namespace qcsma;

namespace {

// Independent oracle: plain bit loop over every subset, no pruning, no
// shared code with the library's backtracking enumerator.
std::vector<std::uint64_t> brute_force_feasible(const ConflictGraph& g) {
    std::vector<std::uint64_t> out;
    const int n = g.link_count();
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = i + 1; j < n && ok; ++j)
                if ((mask >> i & 1) && (mask >> j & 1) && g.in_conflict(i, j)) ok = false;
        if (ok) out.push_back(mask);
    }
    return out;
}

bool brute_force_maximal(const ConflictGraph& g, std::uint64_t mask) {
    const int n = g.link_count();
    for (int j = 0; j < n; ++j) {
        if (mask >> j & 1) continue;
        bool addable = true;
        for (int i = 0; i < n; ++i)
            if ((mask >> i & 1) && g.in_conflict(i, j)) addable = false;
        if (addable) return false;
    }
    return true;
}

ConflictGraph random_graph(int n, double edge_prob, Rng& rng) {
    ConflictGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (uniform_unit(rng) < edge_prob) g.add_conflict(i, j);
    return g;
}

}  // namespace

TEST_CASE("feasibility basics") {
    ConflictGraph pair = path_conflicts(2);
    CHECK(is_feasible(pair, Schedule(2)));  // empty schedule
    CHECK(is_feasible(pair, Schedule::from_links1(2, {1})));
    CHECK_FALSE(is_feasible(pair, Schedule::from_links1(2, {1, 2})));

    ConflictGraph p3 = path_conflicts(3);
    CHECK_FALSE(is_feasible(p3, Schedule::from_links1(3, {1, 2})));  // shared node
    CHECK(is_feasible(p3, Schedule::from_links1(3, {1, 3})));

    CHECK_THROWS_AS(is_feasible(pair, Schedule(3)), DimensionError);
}

TEST_CASE("grid24 reference schedules are feasible and maximal") {
    ConflictGraph g = grid24();
    CHECK(g.link_count() == 24);
    for (const auto& ids : grid24_maximal_sets()) {
        Schedule s = Schedule::from_links1(24, ids);
        CHECK(is_feasible(g, s));
        CHECK(is_maximal(g, s));
        CHECK(s.count() == 8);
    }
}

TEST_CASE("enumerate_feasible matches the brute-force oracle") {
    Rng rng(7);
    std::vector<ConflictGraph> graphs;
    graphs.push_back(path_conflicts(1));
    graphs.push_back(path_conflicts(2));
    graphs.push_back(path_conflicts(3));
    graphs.push_back(ring_conflicts(5, 1));
    graphs.push_back(ring9(2));
    for (int trial = 0; trial < 10; ++trial) graphs.push_back(random_graph(8, 0.3, rng));

    for (const auto& g : graphs) {
        auto expect = brute_force_feasible(g);
        auto got = enumerate_feasible(g);
        REQUIRE(got.size() == expect.size());
        for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k].mask() == expect[k]);
    }
}

TEST_CASE("enumeration order and small examples") {
    auto single = enumerate_feasible(path_conflicts(1));
    REQUIRE(single.size() == 2);
    CHECK(single[0].none());
    CHECK(single[1].mask() == 1);

    auto pair = enumerate_feasible(path_conflicts(2));
    REQUIRE(pair.size() == 3);
    CHECK(pair[0].none());
    CHECK(pair[1].mask() == 1);
    CHECK(pair[2].mask() == 2);
}

TEST_CASE("enumeration cap") {
    CHECK_THROWS_AS(enumerate_feasible(path_conflicts(25)), EnumerationCapError);
    CHECK_NOTHROW(enumerate_feasible(path_conflicts(25), 25));
}

TEST_CASE("maximal schedules") {
    ConflictGraph pair = path_conflicts(2);
    auto mx = enumerate_maximal(pair);
    REQUIRE(mx.size() == 2);
    CHECK(mx[0].mask() == 1);
    CHECK(mx[1].mask() == 2);

    ConflictGraph r9 = ring9(2);
    CHECK(is_maximal(r9, Schedule::from_links1(9, {1, 5})));
    CHECK(is_maximal(r9, Schedule::from_links1(9, {1, 4, 7})));
    CHECK_FALSE(is_maximal(r9, Schedule::from_links1(9, {1})));

    // grid24: the four reference sets appear among the maximum-size maximals.
    ConflictGraph g24 = grid24();
    auto maximals = enumerate_maximal(g24);
    int best = 0;
    for (const auto& m : maximals) best = std::max(best, m.count());
    CHECK(best == 8);
    for (const auto& ids : grid24_maximal_sets()) {
        Schedule s = Schedule::from_links1(24, ids);
        CHECK(std::find(maximals.begin(), maximals.end(), s) != maximals.end());
    }
}

TEST_CASE("maximality properties against the oracle") {
    Rng rng(21);
    for (int trial = 0; trial < 8; ++trial) {
        ConflictGraph g = random_graph(7, 0.35, rng);
        auto feas = enumerate_feasible(g);
        auto maximal = enumerate_maximal(g);
        std::set<std::uint64_t> feas_set, max_set;
        for (const auto& s : feas) feas_set.insert(s.mask());
        for (const auto& s : maximal) max_set.insert(s.mask());

        // maximal subset of feasible, and agreement with the oracle test
        for (const auto& s : maximal) CHECK(feas_set.count(s.mask()) == 1);
        for (const auto& s : feas)
            CHECK((max_set.count(s.mask()) == 1) == brute_force_maximal(g, s.mask()));

        // every feasible schedule extends to some maximal one
        for (const auto& s : feas) {
            bool covered = false;
            for (const auto& m : maximal)
                if (s.is_subset_of(m)) covered = true;
            CHECK(covered);
        }

        // union of maximal schedules covers every link
        Schedule all(g.link_count());
        for (const auto& m : maximal) all = all | m;
        CHECK(all.count() == g.link_count());
    }
}

TEST_CASE("k-hop builder on the 9-cycle") {
    ConflictGraph k2 = ring9(2);
    CHECK(k2.link_count() == 9);
    for (int i = 0; i < 9; ++i) CHECK(int(k2.conflicts(i).size()) == 4);
    for (int i = 0; i < 9; ++i) {
        for (int d : {1, 2}) {
            CHECK(k2.in_conflict(i, (i + d) % 9));
            CHECK(k2.in_conflict(i, (i + 9 - d) % 9));
        }
        CHECK_FALSE(k2.in_conflict(i, (i + 3) % 9));
        CHECK_FALSE(k2.in_conflict(i, (i + 4) % 9));
    }
    CHECK(is_feasible(k2, Schedule::from_links1(9, {3, 6, 9})));

    ConflictGraph k1 = ring_conflicts(9, 1);
    for (int i = 0; i < 9; ++i) {
        CHECK(int(k1.conflicts(i).size()) == 2);
        CHECK(k1.in_conflict(i, (i + 1) % 9));
        CHECK_FALSE(k1.in_conflict(i, (i + 2) % 9));
    }
}

TEST_CASE("grid24 is exactly the shares-a-node graph") {
    ConflictGraph g = grid24();
    // 1-hop interference on the grid: recompute conflicts from the labeling
    // and compare. Row-major nodes, horizontals before verticals per row.
    std::vector<std::pair<int, int>> links;
    auto node = [](int r, int c) { return r * 4 + c; };
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c + 1 < 4; ++c) links.push_back({node(r, c), node(r, c + 1)});
        if (r + 1 < 4)
            for (int c = 0; c < 4; ++c) links.push_back({node(r, c), node(r + 1, c)});
    }
    REQUIRE(links.size() == 24);
    for (int i = 0; i < 24; ++i)
        for (int j = i + 1; j < 24; ++j) {
            auto [a, b] = links[i];
            auto [c, d] = links[j];
            bool share = a == c || a == d || b == c || b == d;
            CHECK(g.in_conflict(i, j) == share);
        }
}

TEST_CASE("builder invariants: symmetry and no self-conflict") {
    Rng rng(5);
    for (const auto& g : {grid24(), ring9(2), ring9(1), path_conflicts(6), random_graph(9, 0.4, rng)}) {
        CHECK_NOTHROW(g.check_invariants());
        for (int i = 0; i < g.link_count(); ++i) {
            CHECK_FALSE(g.in_conflict(i, i));
            for (int j = 0; j < g.link_count(); ++j) CHECK(g.in_conflict(i, j) == g.in_conflict(j, i));
        }
    }
}

TEST_CASE("k-hop builder rejects dangling endpoints") {
    NodeGraph ng;
    ng.node_count = 2;
    ng.edges = {{1, 2}};
    CHECK_THROWS_AS(build_khop_conflicts(ng, {{1, 3}}, 1), TopologyError);
}
