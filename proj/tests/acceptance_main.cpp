// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Everything is seeded and deterministic.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include "qcsma/chain_analysis.hpp"
#include "qcsma/config.hpp"
#include "qcsma/node_protocol.hpp"
#include "qcsma/report.hpp"
#include "qcsma/sim_engine.hpp"

using namespace qcsma;

namespace {

struct Harness {
    int failed = 0;

    void report(int number, const std::string& name, bool ok, const std::string& detail) {
        std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
    }
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

struct Fixture {
    std::string name;
    ConflictGraph g;
    std::vector<double> p;
};

std::vector<Fixture> small_fixtures() {
    std::vector<Fixture> f;
    f.push_back({"single", path_conflicts(1), {0.5}});
    f.push_back({"pair", path_conflicts(2), {0.3, 0.6}});
    f.push_back({"path3", path_conflicts(3), {0.3, 0.6, 0.5}});
    f.push_back({"ring5", ring_conflicts(5, 1), {0.3, 0.45, 0.5, 0.62, 0.7}});
    f.push_back({"ring9", ring9(2), {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.55, 0.45, 0.35}});
    return f;
}

// ---------------------------------------------------------------------------
// Criterion 1: product-form correctness on the five fixtures
// ---------------------------------------------------------------------------

void criterion_1(Harness& h) {
    double t0 = now_seconds();
    double worst_stat = 0.0, worst_db = 0.0;
    bool ok = true;
    for (const auto& f : small_fixtures()) {
        DecisionDistribution dd = qcsma_decision_distribution(f.g, 2);
        ChainModel cm = build_chain(f.g, dd, ActivationVector{f.p});
        worst_stat = std::max(worst_stat, stationarity_residual(cm));
        worst_db = std::max(worst_db, check_detailed_balance(cm));
        if (!check_irreducibility(dd, f.g)) ok = false;
    }
    double dt = now_seconds() - t0;
    ok = ok && worst_stat < 1e-12 && worst_db < 1e-12 && dt < 10.0;
    std::ostringstream os;
    os << "stationarity " << worst_stat << ", detailed balance " << worst_db << ", " << dt << " s";
    h.report(1, "product-form correctness on 5 fixtures", ok, os.str());
}

// ---------------------------------------------------------------------------
// Criterion 2: simulation-to-theory agreement (link and node variants)
// ---------------------------------------------------------------------------

void criterion_2(Harness& h) {
    double t0 = now_seconds();
    ConflictGraph pair = path_conflicts(2);
    std::vector<double> p{0.5, 0.5};
    auto stat = product_form_stationary(pair, ActivationVector{p});

    auto link_step = [&](const Schedule& x, Rng& rng) {
        return qcsma_step_probs(pair, 2, p, x, rng).x;
    };
    double tv_link = total_variation(empirical_stationary(pair, link_step, 1000000, 101), stat.pi);

    NodeTopology nt = NodeTopology::make(3, {{0, 1}, {0, 2}, {1, 2}}, {{0, 2}, {1, 2}});
    ConflictGraph cg = conflict_set_from_topology(nt);
    auto node_stat = product_form_stationary(cg, ActivationVector{p});
    QueueVector q{5, 5};
    NodeBits bits = NodeBits::zeros(3);
    auto node_step = [&](const Schedule& x, Rng& rng) {
        NodeSlotResult r = node_qcsma_slot(nt, 2, q, p, bits, x, rng, &cg);
        bits = r.bits;
        return r.x;
    };
    double tv_node = total_variation(empirical_stationary(cg, node_step, 1000000, 102),
                                     node_stat.pi);
    double dt = now_seconds() - t0;
    bool ok = tv_link < 0.01 && tv_node < 0.02 && dt < 30.0;
    std::ostringstream os;
    os << "TV link " << tv_link << " (< 0.01), TV node " << tv_node << " (< 0.02), " << dt << " s";
    h.report(2, "simulation matches the stationary law", ok, os.str());
}

// ---------------------------------------------------------------------------
// Criterion 3: Monte Carlo one-step frequencies against the exact matrix
// ---------------------------------------------------------------------------

void criterion_3(Harness& h) {
    ConflictGraph g = path_conflicts(3);
    std::vector<double> p{0.3, 0.6, 0.5};
    ChainModel cm = build_chain(g, qcsma_decision_distribution(g, 2), ActivationVector{p});

    const long long trials = 1000000;
    double worst = 0.0;
    bool ok = true;
    Rng rng(103);
    for (int s = 0; s < cm.P.n; ++s) {
        std::vector<long long> counts(cm.P.n, 0);
        for (long long t = 0; t < trials; ++t)
            ++counts[cm.state_index(qcsma_step_probs(g, 2, p, cm.states[s], rng).x)];
        for (int j = 0; j < cm.P.n; ++j) {
            double expect = cm.P.at(s, j);
            double got = double(counts[j]) / double(trials);
            if (expect == 0.0) {
                if (counts[j] != 0) ok = false;  // impossible transition fired
                continue;
            }
            double sigma = std::sqrt(expect * (1 - expect) / double(trials));
            double dev = std::abs(got - expect) / sigma;
            worst = std::max(worst, dev);
            if (dev > 4.0) ok = false;
        }
    }
    std::ostringstream os;
    os << "5 states x 1e6 trials, worst deviation " << worst << " sigma (<= 4)";
    h.report(3, "one-step frequencies match the transition matrix", ok, os.str());
}

// ---------------------------------------------------------------------------
// Criterion 4: feasibility of every schedule across stress runs
// ---------------------------------------------------------------------------

void criterion_4(Harness& h) {
    long long checked = 0;
    bool ok = true;
    try {
        for (const ConflictGraph& g : {ring9(2), path_conflicts(6)}) {
            const int n = g.link_count();
            QueueVector q(n, 120);
            SchedulerConfig qc;
            qc.algorithm = Algorithm::qcsma;
            qc.W = 3;
            SchedulerConfig dg;
            dg.algorithm = Algorithm::dgms;
            SchedulerConfig hy;
            hy.algorithm = Algorithm::hybrid;
            hy.q0 = 100.0;
            Rng rng(104);
            Schedule xq(n), xh(n);
            std::vector<HybridLinkState> st(n);
            for (int t = 1; t <= 20000; ++t) {
                SlotOutcome a = qcsma_step(g, qc, q, xq, rng);
                ok = ok && is_feasible(g, a.decision) && is_feasible(g, a.x);
                xq = a.x;
                SlotOutcome b = dgms_step(g, dg, q, rng);
                ok = ok && is_feasible(g, b.x);
                SlotOutcome c = dms_step(g, 4, q, rng);
                ok = ok && is_feasible(g, c.x);
                HybridOutcome hs = hybrid_step(g, hy, q, xh, st, rng);
                ok = ok && is_feasible(g, hs.slot.decision) && is_feasible(g, hs.slot.x);
                xh = hs.slot.x;
                st = hs.state;
                ok = ok && is_feasible(g, gms_step(g, q));
                checked += 6;
                for (auto& v : q)
                    v = std::max<long long>(0, v + (long long)(uniform_below(rng, 5)) - 2);
            }
        }
        // engine-level: every slot of ring runs re-checked by the observer,
        // covering the hybrid threshold-crossing regime
        ConflictGraph g = ring9(2);
        ParsedConfig pd = paper_defaults("ring");
        for (Algorithm a : {Algorithm::qcsma, Algorithm::hybrid, Algorithm::dgms}) {
            ExperimentConfig ec = pd.experiment_for(a);
            ec.horizon = 30000;
            ec.runs = 2;
            run_experiment(g, ec, [&](long long, const Schedule& x, const QueueVector&) {
                if (!is_feasible(g, x)) ok = false;
                ++checked;
            });
        }
        // node-protocol slots
        NodeTopology nt = NodeTopology::make(4, {{0, 1}, {1, 2}, {2, 3}},
                                             {{0, 1}, {1, 2}, {2, 3}});
        ConflictGraph cg = conflict_set_from_topology(nt);
        QueueVector q{5, 5, 5};
        std::vector<double> p{0.5, 0.5, 0.5};
        NodeBits bits = NodeBits::zeros(4);
        Schedule x(3);
        Rng rng(105);
        for (int t = 0; t < 20000; ++t) {
            NodeSlotResult r = node_qcsma_slot(nt, 2, q, p, bits, x, rng, &cg);
            ok = ok && is_feasible(cg, r.decision) && is_feasible(cg, r.x);
            bits = r.bits;
            x = r.x;
            checked += 2;
        }
    } catch (const std::exception& e) {
        ok = false;
        std::printf("        feasibility stress raised: %s\n", e.what());
    }
    std::ostringstream os;
    os << checked << " schedules checked, zero violations allowed";
    h.report(4, "feasibility of every decision and transmission schedule", ok, os.str());
}

// ---------------------------------------------------------------------------
// Criterion 5: hidden/exposed terminal scenarios
// ---------------------------------------------------------------------------

void criterion_5(Harness& h) {
    bool ok = scenario_hidden_terminal(0, 1) == std::vector<int>{1} &&
              scenario_hidden_terminal(1, 1) == std::vector<int>{2} &&
              scenario_hidden_terminal(2, 0) == std::vector<int>{2} &&
              scenario_hidden_terminal(0, 2) == std::vector<int>{1} &&
              scenario_hidden_terminal(2, 2) == std::vector<int>{2};
    for (int t1 = 0; t1 < 3 && ok; ++t1)
        for (int t3 = 0; t3 < 3 && ok; ++t3)
            ok = scenario_exposed_terminal(t1, t3) == std::vector<int>{1, 3};
    h.report(5, "hidden and exposed terminal scenarios", ok,
             "hidden: early sender wins, ties go to link 2; exposed: both links always admitted");
}

// ---------------------------------------------------------------------------
// Criteria 6 and 7: the grid and ring experiments
// ---------------------------------------------------------------------------

struct PointResult {
    Algorithm algo = Algorithm::qcsma;
    double value = 0.0;
    Metrics metrics;
    SlopeFit mean_fit;
};

std::vector<PointResult> run_points(const ConflictGraph& g, const ParsedConfig& pc,
                                    const std::vector<std::pair<Algorithm, double>>& points) {
    std::vector<PointResult> out(points.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        while (true) {
            std::size_t k = cursor.fetch_add(1);
            if (k >= points.size()) break;
            ParsedConfig local = pc;
            if (local.traffic.kind == TrafficSpec::Kind::bernoulli_grid)
                local.traffic.rho = points[k].second;
            else
                local.traffic.eps = points[k].second;
            ExperimentConfig ec = local.experiment_for(points[k].first);
            PointResult r;
            r.algo = points[k].first;
            r.value = points[k].second;
            r.metrics = run_experiment(g, ec);
            r.mean_fit = stability_slope(mean_trace(r.metrics));
            out[k] = std::move(r);
        }
    };
    unsigned jobs = std::max(2u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return out;
}

std::string fit_string(const PointResult& r) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s@%.2f slope %.4f r2 %.2f -> %s",
                  algorithm_name(r.algo).c_str(), r.value, r.mean_fit.slope, r.mean_fit.r2,
                  r.mean_fit.unstable ? "unstable" : "stable");
    return buf;
}

void criterion_6(Harness& h) {
    ConflictGraph g = grid24();
    ParsedConfig pd = paper_defaults("grid");

    std::vector<std::pair<Algorithm, double>> points;
    for (double rho : {0.90, 0.95})
        for (Algorithm a : {Algorithm::dms, Algorithm::dgms, Algorithm::qcsma, Algorithm::hybrid})
            points.push_back({a, rho});
    for (double rho : {0.50, 0.60, 0.70})
        for (Algorithm a : {Algorithm::qcsma, Algorithm::hybrid}) points.push_back({a, rho});

    auto results = run_points(g, pd, points);

    // (a) instability split at high load, one verdict per across-run mean path
    bool ok_a = true;
    std::ostringstream detail;
    for (const auto& r : results) {
        if (r.value < 0.89) continue;
        bool want_unstable = r.algo == Algorithm::dms || r.algo == Algorithm::dgms;
        if (r.mean_fit.unstable != want_unstable) {
            ok_a = false;
            detail << " [" << fit_string(r) << ", expected "
                   << (want_unstable ? "unstable" : "stable") << "]";
        }
    }
    // (b) hybrid no worse than qcsma at low load
    bool ok_b = true;
    std::map<double, double> q_qcsma, q_hybrid;
    for (const auto& r : results) {
        if (r.value > 0.71) continue;
        (r.algo == Algorithm::qcsma ? q_qcsma : q_hybrid)[r.value] = r.metrics.avg_queue_mean;
    }
    for (auto [rho, v] : q_hybrid) {
        if (v > q_qcsma[rho]) {
            ok_b = false;
            detail << " [hybrid avg " << v << " > qcsma " << q_qcsma[rho] << " at rho " << rho
                   << "]";
        }
    }
    std::ostringstream os;
    os << "(a) verdict split at rho 0.90/0.95" << (ok_a ? " ok" : " violated")
       << "; (b) hybrid <= qcsma at rho 0.50-0.70" << (ok_b ? " ok" : " violated")
       << detail.str();
    h.report(6, "grid experiment trend", ok_a && ok_b, os.str());
}

void criterion_7(Harness& h) {
    ConflictGraph g = ring9(2);
    ParsedConfig pd = paper_defaults("ring");

    std::vector<std::pair<Algorithm, double>> points = {
        {Algorithm::dgms, 0.09},   {Algorithm::dms, 0.09}, {Algorithm::qcsma, 0.09},
        {Algorithm::hybrid, 0.09}, {Algorithm::gms, 0.05}, {Algorithm::gms, 0.09},
        {Algorithm::cyclic, 0.09},
    };
    auto results = run_points(g, pd, points);

    bool ok = true;
    std::ostringstream detail;
    for (const auto& r : results) {
        bool want_unstable = r.algo == Algorithm::dgms || r.algo == Algorithm::dms ||
                             r.algo == Algorithm::gms;
        if (r.mean_fit.unstable != want_unstable) {
            ok = false;
            detail << " [" << fit_string(r) << ", expected "
                   << (want_unstable ? "unstable" : "stable") << "]";
        }
    }
    h.report(7, "ring experiment with adversarial traffic", ok,
             "D-GMS/D-MS/GMS diverge, Q-CSMA/Hybrid/cyclic stay stable" + detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 8: weight-concentration bound
// ---------------------------------------------------------------------------

void criterion_8(Harness& h) {
    bool ok = true;
    double worst_margin = 1e300;
    Rng rng(108);
    std::vector<ConflictGraph> graphs;
    for (const auto& f : small_fixtures()) graphs.push_back(f.g);
    for (int extra = 0; extra < 5; ++extra) {
        int n = 2 + int(uniform_below(rng, 9));
        ConflictGraph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (uniform_unit(rng) < 0.35) g.add_conflict(i, j);
        graphs.push_back(std::move(g));
    }
    long long cases = 0;
    for (const auto& g : graphs) {
        for (int draw = 0; draw < 8; ++draw) {
            std::vector<double> w(g.link_count());
            for (double& v : w) v = 12.0 * uniform_unit(rng);
            for (double eps : {0.1, 0.25, 0.5, 0.75, 0.9}) {
                auto c = weight_concentration(g, w, eps);
                if (c.exact_mass > c.bound) ok = false;
                worst_margin = std::min(worst_margin, c.bound - c.exact_mass);
                ++cases;
            }
        }
    }
    std::ostringstream os;
    os << cases << " cases over " << graphs.size() << " graphs, min bound-mass margin "
       << worst_margin;
    h.report(8, "weight-concentration bound", ok, os.str());
}

// ---------------------------------------------------------------------------
// Criterion 9: byte-identical CSV under a repeated seed
// ---------------------------------------------------------------------------

std::pair<std::string, std::string> render_csvs(const ConflictGraph& g,
                                                const ExperimentConfig& ec,
                                                const std::string& name, double value) {
    Metrics m = run_experiment(g, ec);
    return {metrics_csv(metrics_rows(name, value, ec.horizon, m)),
            samplepath_csv(mean_trace(m))};
}

void criterion_9(Harness& h) {
    ConflictGraph g = ring9(2);
    ParsedConfig pd = paper_defaults("ring");
    ExperimentConfig ec = pd.experiment_for(Algorithm::dgms);
    ec.horizon = 50000;
    auto a = render_csvs(g, ec, "dgms", 0.09);
    auto b = render_csvs(g, ec, "dgms", 0.09);
    bool ok = a.first == b.first && a.second == b.second && !a.first.empty();
    std::ostringstream os;
    os << "metrics.csv " << a.first.size() << " bytes, samplepath.csv " << a.second.size()
       << " bytes, identical across repeated runs";
    h.report(9, "determinism: byte-identical CSV output", ok, os.str());
}

}  // namespace

int main() {
    Harness h;
    criterion_1(h);
    criterion_2(h);
    criterion_3(h);
    criterion_4(h);
    criterion_5(h);
    criterion_6(h);
    criterion_7(h);
    criterion_8(h);
    criterion_9(h);
    if (h.failed == 0)
        std::printf("acceptance: all 9 criteria passed\n");
    else
        std::printf("acceptance: %d criterion/criteria failed\n", h.failed);
    return h.failed == 0 ? 0 : 1;
}
