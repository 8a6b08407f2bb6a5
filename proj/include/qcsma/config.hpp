#ifndef QCSMA_CONFIG_HPP
#define QCSMA_CONFIG_HPP

#include <string>
#include <string_view>
#include <vector>

#include "qcsma/conflict_graph.hpp"
#include "qcsma/sim_engine.hpp"

namespace qcsma {

// Experiment configs are sectioned key=value text:
//
//   [topology]   kind = grid24 | ring9 | file, plus k= (ring9) or path= (file)
//   [scheduler]  algorithm = one name, or a space-separated list for sweeps,
//                plus W, B, b, W1, W0, hybrid_W1, q0, weight, alpha, p_min
//   [traffic]    kind = bernoulli-grid | ring-adversarial | bernoulli | poisson,
//                plus rho= / eps= / rates=
//   [run]        horizon, runs, seed, record_interval
//
// '#' starts a comment. Unknown keys are rejected with their line number.

struct TopologySpec {
    enum class Kind { grid24, ring9, file };
    Kind kind = Kind::grid24;
    int k = 2;         // ring9 interference hops
    std::string path;  // file kind

    bool operator==(const TopologySpec&) const = default;
};

struct ParsedConfig {
    TopologySpec topology;
    std::vector<Algorithm> algorithms;  // >= 1; run wants exactly 1
    SchedulerConfig scheduler;          // shared parameters; algorithm = algorithms[0]
    int hybrid_W1 = 14;                 // hybrid frame width, distinct from the D-GMS one
    TrafficSpec traffic;
    long long horizon = 100000;
    int runs = 10;
    std::uint64_t seed = 1;
    long long record_interval = 100;

    bool operator==(const ParsedConfig&) const = default;

    SchedulerConfig scheduler_for(Algorithm a) const;
    ExperimentConfig experiment_for(Algorithm a) const;
    ConflictGraph build_graph() const;
    std::string topology_name() const;
};

/// Throws ConfigError carrying a 1-based line number on any malformed input.
ParsedConfig parse_config_text(std::string_view text);
ParsedConfig parse_config_file(const std::string& path);

/// Canonical rendering; parse_config_text(emit_config(c)) == c.
std::string emit_config(const ParsedConfig& c);

/// The parameter set of the published experiments ("grid" or "ring").
ParsedConfig paper_defaults(std::string_view experiment);

// Topology files list links as "id: u v" (1-based node ids) and declare the
// conflict structure either explicitly with "conflict: i j" lines or as
// "interference: k-hop". An optional "nodes: n" pins the node count.
ConflictGraph load_topology_text(std::string_view text);
ConflictGraph load_topology_file(const std::string& path);

}  // namespace qcsma

#endif  // QCSMA_CONFIG_HPP
