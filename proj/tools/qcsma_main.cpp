// qcsma: link-scheduling laboratory for queue-length based CSMA/CA
// algorithms on conflict graphs. Subcommands cover seeded experiment runs,
// parameter sweeps, exact chain verification, protocol scenarios, chain
// analysis dumps, and canonical experiment configs.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "qcsma/chain_analysis.hpp"
#include "qcsma/config.hpp"
#include "qcsma/contention.hpp"
#include "qcsma/node_protocol.hpp"
#include "qcsma/report.hpp"
#include "qcsma/sim_engine.hpp"

using namespace qcsma;
namespace fs = std::filesystem;

namespace {

bool log_enabled() {
    const char* v = std::getenv("QCSMA_LOG");
    return v && *v;
}

std::mutex log_mutex;

void log_line(const std::string& msg) {
    if (!log_enabled()) return;
    std::lock_guard<std::mutex> lock(log_mutex);
    std::cerr << "[qcsma] " << msg << "\n";
}

int control_mini_slots(const SchedulerConfig& s) {
    switch (s.algorithm) {
        case Algorithm::qcsma:
        case Algorithm::dms: return s.W;
        case Algorithm::dgms: return s.W1 * s.B;
        case Algorithm::hybrid: return hybrid_control_slot_length(s);
        default: return 0;
    }
}

struct Overrides {
    long long horizon = -1;
    int runs = -1;
    long long seed = -1;

    void apply(ParsedConfig& c) const {
        if (horizon > 0) c.horizon = horizon;
        if (runs > 0) c.runs = runs;
        if (seed >= 0) c.seed = std::uint64_t(seed);
    }
};

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

int cmd_run(const std::string& config_path, const std::string& out_dir, const Overrides& ov,
            bool svg, double data_mini_slots) {
    ParsedConfig pc = parse_config_file(config_path);
    ov.apply(pc);
    if (pc.algorithms.size() != 1)
        throw ConfigError(0, "run needs a single algorithm; the config lists " +
                                 std::to_string(pc.algorithms.size()));
    Algorithm algo = pc.algorithms.front();
    ConflictGraph g = pc.build_graph();
    ExperimentConfig ec = pc.experiment_for(algo);

    log_line("run " + algorithm_name(algo) + " on " + pc.topology_name());
    Metrics m = run_experiment(g, ec);

    fs::create_directories(out_dir);
    ArrivalProcess ap{pc.traffic};
    auto rows = metrics_rows(algorithm_name(algo), ap.sweep_value(), ec.horizon, m);
    write_file((fs::path(out_dir) / "metrics.csv").string(), metrics_csv(rows));
    auto trace = mean_trace(m);
    write_file((fs::path(out_dir) / "samplepath.csv").string(), samplepath_csv(trace));
    if (svg) {
        ChartSeries series{algorithm_name(algo), {}};
        for (const auto& p : trace) series.points.push_back({double(p.t), p.mean_queue});
        write_file((fs::path(out_dir) / "samplepath.svg").string(),
                   svg_line_chart("Mean queue sample path (" + pc.topology_name() + ")",
                                  "slot", "mean queue per link", {series}));
    }

    int unstable = 0;
    for (const auto& r : m.runs) unstable += r.fit.unstable;
    std::cout << "algorithm " << algorithm_name(algo) << " on " << pc.topology_name() << ": "
              << "avg queue " << m.avg_queue_mean << " +- " << m.avg_queue_stddev << " over "
              << ec.runs << " runs, " << unstable << " unstable verdicts\n";
    int w = control_mini_slots(ec.scheduler);
    if (w > 0)
        std::cout << "control slot " << w << " mini-slots; schedulable fraction at a "
                  << data_mini_slots << " mini-slot data slot: "
                  << overhead_adjusted_capacity(data_mini_slots, w) << "\n";
    std::cout << "wrote " << (fs::path(out_dir) / "metrics.csv").string() << ", "
              << (fs::path(out_dir) / "samplepath.csv").string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

std::vector<double> default_grid(TrafficSpec::Kind kind) {
    std::vector<double> out;
    if (kind == TrafficSpec::Kind::bernoulli_grid)
        for (int k = 0; k <= 9; ++k) out.push_back(0.50 + 0.05 * k);
    else if (kind == TrafficSpec::Kind::ring_adversarial)
        for (int k = 1; k <= 10; ++k) out.push_back(0.01 * k);
    return out;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::string& grid_arg, int jobs, const Overrides& ov, bool svg) {
    ParsedConfig pc = parse_config_file(config_path);
    ov.apply(pc);
    if (pc.traffic.kind != TrafficSpec::Kind::bernoulli_grid &&
        pc.traffic.kind != TrafficSpec::Kind::ring_adversarial)
        throw ConfigError(0, "sweep needs bernoulli-grid (rho) or ring-adversarial (eps) traffic");

    std::vector<double> grid;
    if (grid_arg.empty()) {
        grid = default_grid(pc.traffic.kind);
    } else {
        std::istringstream is(grid_arg);
        std::string tok;
        while (std::getline(is, tok, ','))
            if (!tok.empty()) grid.push_back(std::stod(tok));
    }
    if (grid.empty()) throw ConfigError(0, "empty parameter grid");

    struct Point {
        Algorithm algo;
        double value;
    };
    std::vector<Point> points;
    for (Algorithm a : pc.algorithms)
        for (double v : grid) points.push_back({a, v});

    ConflictGraph g = pc.build_graph();
    std::vector<Metrics> results(points.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        while (true) {
            std::size_t k = cursor.fetch_add(1);
            if (k >= points.size()) break;
            ParsedConfig local = pc;
            if (local.traffic.kind == TrafficSpec::Kind::bernoulli_grid)
                local.traffic.rho = points[k].value;
            else
                local.traffic.eps = points[k].value;
            ExperimentConfig ec = local.experiment_for(points[k].algo);
            results[k] = run_experiment(g, ec);
            std::ostringstream os;
            os << algorithm_name(points[k].algo) << " " << points[k].value << " done, avg queue "
               << results[k].avg_queue_mean;
            log_line(os.str());
        }
    };
    jobs = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<MetricsRow> rows;
    std::vector<LabeledTrace> traces;
    for (std::size_t k = 0; k < points.size(); ++k) {
        auto r = metrics_rows(algorithm_name(points[k].algo), points[k].value, pc.horizon,
                              results[k]);
        rows.insert(rows.end(), r.begin(), r.end());
        traces.push_back({algorithm_name(points[k].algo), points[k].value,
                          mean_trace(results[k])});
    }
    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "metrics.csv").string(), metrics_csv(rows));
    write_file((fs::path(out_dir) / "samplepath.csv").string(), samplepath_sweep_csv(traces));

    if (svg) {
        std::vector<ChartSeries> series;
        for (Algorithm a : pc.algorithms) {
            ChartSeries s{algorithm_name(a), {}};
            for (std::size_t k = 0; k < points.size(); ++k)
                if (points[k].algo == a)
                    s.points.push_back({points[k].value, results[k].avg_queue_mean});
            series.push_back(std::move(s));
        }
        std::string xlabel =
            pc.traffic.kind == TrafficSpec::Kind::bernoulli_grid ? "traffic intensity rho"
                                                                 : "epsilon";
        write_file((fs::path(out_dir) / "sweep.svg").string(),
                   svg_line_chart("Long-term average queue per link (" + pc.topology_name() + ")",
                                  xlabel, "avg queue per link", series, true));
    }

    for (std::size_t k = 0; k < points.size(); ++k) {
        int unstable = 0;
        for (const auto& r : results[k].runs) unstable += r.fit.unstable;
        std::cout << algorithm_name(points[k].algo) << " " << points[k].value << ": avg queue "
                  << results[k].avg_queue_mean << " +- " << results[k].avg_queue_stddev << ", "
                  << unstable << "/" << results[k].runs.size() << " unstable\n";
    }
    std::cout << "wrote " << (fs::path(out_dir) / "metrics.csv").string() << ", "
              << (fs::path(out_dir) / "samplepath.csv").string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct Verifier {
    int failures = 0;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    }
};

int cmd_verify() {
    Verifier v;

    struct Fixture {
        std::string name;
        ConflictGraph g;
        std::vector<double> p;
    };
    std::vector<Fixture> fixtures;
    fixtures.push_back({"single link", path_conflicts(1), {0.5}});
    fixtures.push_back({"conflicting pair", path_conflicts(2), {0.3, 0.6}});
    fixtures.push_back({"3-link path", path_conflicts(3), {0.3, 0.6, 0.5}});
    fixtures.push_back({"5-link ring 1-hop", ring_conflicts(5, 1), {0.3, 0.45, 0.5, 0.62, 0.7}});
    fixtures.push_back({"ring9 2-hop", ring9(2),
                        {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.55, 0.45, 0.35}});

    for (const auto& f : fixtures) {
        DecisionDistribution dd = qcsma_decision_distribution(f.g, 2);
        ChainModel cm = build_chain(f.g, dd, ActivationVector{f.p});
        double sr = stationarity_residual(cm);
        double db = check_detailed_balance(cm);
        std::ostringstream os;
        os << "stationarity " << sr << ", detailed balance " << db;
        v.check("product form on " + f.name,
                sr < 1e-12 && db < 1e-12 && check_irreducibility(dd, f.g), os.str());
    }

    {
        ConflictGraph pair = path_conflicts(2);
        std::vector<double> p{0.5, 0.5};
        auto stat = product_form_stationary(pair, ActivationVector{p});
        auto step = [&](const Schedule& x, Rng& rng) {
            return qcsma_step_probs(pair, 2, p, x, rng).x;
        };
        double tv = total_variation(empirical_stationary(pair, step, 1000000, 2024), stat.pi);
        v.check("link-level simulation matches the stationary law", tv < 0.01,
                "TV " + std::to_string(tv));

        NodeTopology nt = NodeTopology::make(3, {{0, 1}, {0, 2}, {1, 2}}, {{0, 2}, {1, 2}});
        ConflictGraph cg = conflict_set_from_topology(nt);
        QueueVector q{5, 5};
        NodeBits bits = NodeBits::zeros(3);
        auto node_step = [&](const Schedule& x, Rng& rng) {
            NodeSlotResult r = node_qcsma_slot(nt, 2, q, p, bits, x, rng, &cg);
            bits = r.bits;
            return r.x;
        };
        auto node_stat = product_form_stationary(cg, ActivationVector{p});
        double tvn = total_variation(empirical_stationary(cg, node_step, 1000000, 2025),
                                     node_stat.pi);
        v.check("node-level simulation matches the stationary law", tvn < 0.02,
                "TV " + std::to_string(tvn));
    }

    {
        // Monte Carlo one-step transition frequencies against the matrix
        ConflictGraph g = path_conflicts(3);
        std::vector<double> p{0.3, 0.6, 0.5};
        ChainModel cm = build_chain(g, qcsma_decision_distribution(g, 2), ActivationVector{p});
        const long long trials = 1000000;
        Rng rng(4242);
        bool ok = true;
        double worst = 0.0;
        for (int s = 0; s < cm.P.n && ok; ++s) {
            std::vector<long long> counts(cm.P.n, 0);
            for (long long t = 0; t < trials; ++t) {
                Schedule x = qcsma_step_probs(g, 2, p, cm.states[s], rng).x;
                ++counts[cm.state_index(x)];
            }
            for (int j = 0; j < cm.P.n; ++j) {
                double expect = cm.P.at(s, j);
                double got = double(counts[j]) / double(trials);
                double sigma = std::sqrt(std::max(expect * (1 - expect), 0.0) / double(trials));
                double dev = sigma > 0 ? std::abs(got - expect) / sigma
                                       : (counts[j] == 0 ? 0.0 : 1e9);
                worst = std::max(worst, dev);
                if (dev > 4.0) ok = false;
            }
        }
        v.check("one-step frequencies match the transition matrix", ok,
                "worst deviation " + std::to_string(worst) + " sigma");
    }

    {
        bool hidden_ok = scenario_hidden_terminal(0, 1) == std::vector<int>{1} &&
                         scenario_hidden_terminal(1, 1) == std::vector<int>{2} &&
                         scenario_hidden_terminal(2, 0) == std::vector<int>{2};
        v.check("hidden-terminal cases", hidden_ok);
        bool exposed_ok = scenario_exposed_terminal(0, 0) == std::vector<int>{1, 3} &&
                          scenario_exposed_terminal(0, 2) == std::vector<int>{1, 3} &&
                          scenario_exposed_terminal(1, 0) == std::vector<int>{1, 3};
        v.check("exposed-terminal cases", exposed_ok);
    }

    {
        // negative control: a perturbed matrix must trip the residual
        ConflictGraph pair = path_conflicts(2);
        ChainModel cm = build_chain(pair, qcsma_decision_distribution(pair, 2),
                                    ActivationVector::uniform(2, 0.5));
        double min_pi = *std::min_element(cm.pi.begin(), cm.pi.end());
        cm.P.at(0, 1) += 0.01;
        v.check("perturbed matrix fails detailed balance",
                check_detailed_balance(cm) >= 0.01 * min_pi);
    }

    std::cout << (v.failures == 0 ? "all checks passed\n"
                                  : std::to_string(v.failures) + " check(s) failed\n");
    return v.failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// scenario / analyze-chain / paper-defaults
// ---------------------------------------------------------------------------

int cmd_scenario(const std::string& which, int t1, int t2) {
    std::vector<int> m;
    if (which == "hidden")
        m = scenario_hidden_terminal(t1, t2);
    else if (which == "exposed")
        m = scenario_exposed_terminal(t1, t2);
    else
        throw ConfigError(0, "unknown scenario '" + which + "'");
    std::cout << "m = {";
    for (std::size_t i = 0; i < m.size(); ++i) std::cout << (i ? "," : "") << m[i];
    std::cout << "}\n";
    return 0;
}

ConflictGraph chain_topology(const std::string& name, const std::string& path, int k) {
    if (name == "single") return path_conflicts(1);
    if (name == "pair") return path_conflicts(2);
    if (name == "path3") return path_conflicts(3);
    if (name == "ring5") return ring_conflicts(5, 1);
    if (name == "ring9") return ring9(k);
    if (name == "grid24") return grid24();
    if (name == "file") return load_topology_file(path);
    throw ConfigError(0, "unknown topology '" + name + "'");
}

int cmd_analyze_chain(const std::string& topology, const std::string& path, int k, int W,
                      const std::string& p_arg, const std::string& out_path) {
    ConflictGraph g = chain_topology(topology, path, k);

    std::vector<double> p;
    {
        std::istringstream is(p_arg);
        std::string tok;
        while (std::getline(is, tok, ','))
            if (!tok.empty()) p.push_back(std::stod(tok));
    }
    if (p.size() == 1) p.assign(g.link_count(), p[0]);
    if (int(p.size()) != g.link_count())
        throw ConfigError(0, "need 1 or " + std::to_string(g.link_count()) +
                                 " activation probabilities");

    DecisionDistribution dd = qcsma_decision_distribution(g, W);
    ChainModel cm = build_chain(g, dd, ActivationVector{p});

    std::ostringstream os;
    for (int s = 0; s < cm.P.n; ++s) {
        nlohmann::json j;
        j["state"] = cm.states[s].to_string();
        j["links"] = cm.states[s].links1();
        j["pi"] = cm.pi[s];
        j["self_transition"] = cm.P.at(s, s);
        os << j.dump() << "\n";
    }
    nlohmann::json summary;
    summary["states"] = cm.P.n;
    summary["decision_schedules"] = dd.support.size();
    summary["log_Z"] = cm.log_Z;
    summary["stationarity_residual"] = stationarity_residual(cm);
    summary["detailed_balance_residual"] = check_detailed_balance(cm);
    summary["irreducible"] = check_irreducibility(dd, g);
    os << summary.dump() << "\n";

    if (out_path.empty())
        std::cout << os.str();
    else
        write_file(out_path, os.str());
    return 0;
}

int cmd_paper_defaults(const std::string& experiment, const std::string& out_path) {
    std::string text = emit_config(paper_defaults(experiment));
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-time CSMA/CA link-scheduling laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", grid_arg, scen_case, topo = "pair", topo_path,
                p_arg = "0.5", out_path, experiment;
    int jobs = 1, t1 = 0, t2 = 0, k = 2, W = 2;
    bool svg = false;
    double data_mini_slots = 952.0;
    Overrides ov;

    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--horizon", ov.horizon, "override [run] horizon");
        cmd->add_option("--runs", ov.runs, "override [run] runs");
        cmd->add_option("--seed", ov.seed, "override [run] seed");
    };

    CLI::App* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--out-dir", out_dir, "output directory");
    run->add_flag("--svg", svg, "also render an SVG sample-path chart");
    run->add_option("--data-mini-slots", data_mini_slots,
                    "data-slot length used for the overhead figure");
    add_overrides(run);

    CLI::App* sweep = app.add_subcommand("sweep", "sweep rho or eps over a parameter grid");
    sweep->add_option("--config", config_path, "experiment config file")->required();
    sweep->add_option("--out-dir", out_dir, "output directory");
    sweep->add_option("--grid", grid_arg, "comma-separated parameter values");
    sweep->add_option("--jobs", jobs, "parallel workers over grid points");
    sweep->add_flag("--svg", svg, "also render an SVG summary chart");
    add_overrides(sweep);

    CLI::App* verify = app.add_subcommand("verify", "run the exact-chain oracle suite");

    CLI::App* scenario = app.add_subcommand("scenario", "replay a terminal-problem scenario");
    scenario->add_option("--case", scen_case, "hidden or exposed")->required();
    scenario->add_option("--t1", t1, "backoff of the first sender")->required();
    scenario->add_option("--t2", t2, "backoff of the other sender")->required();

    CLI::App* analyze = app.add_subcommand("analyze-chain", "dump states, pi and residuals");
    analyze->add_option("--topology", topo, "single|pair|path3|ring5|ring9|grid24|file");
    analyze->add_option("--path", topo_path, "topology file (with --topology file)");
    analyze->add_option("--k", k, "interference hops for ring9");
    analyze->add_option("--W", W, "Q-CSMA window");
    analyze->add_option("--p", p_arg, "activation probability, single value or per-link list");
    analyze->add_option("--out", out_path, "write to a file instead of stdout");

    CLI::App* defaults = app.add_subcommand("paper-defaults", "emit a canonical experiment config");
    defaults->add_option("experiment", experiment, "grid or ring")->required();
    defaults->add_option("--out", out_path, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, ov, svg, data_mini_slots);
        if (sweep->parsed()) return cmd_sweep(config_path, out_dir, grid_arg, jobs, ov, svg);
        if (verify->parsed()) return cmd_verify();
        if (scenario->parsed()) return cmd_scenario(scen_case, t1, t2);
        if (analyze->parsed()) return cmd_analyze_chain(topo, topo_path, k, W, p_arg, out_path);
        if (defaults->parsed()) return cmd_paper_defaults(experiment, out_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
