#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qcsma/report.hpp"
#include "qcsma/sim_engine.hpp"

using namespace qcsma;

namespace {

ExperimentConfig small_grid_config() {
    ExperimentConfig cfg;
    cfg.topology_name = "grid24";
    cfg.scheduler.algorithm = Algorithm::qcsma;
    cfg.scheduler.W = 48;
    cfg.traffic.kind = TrafficSpec::Kind::bernoulli_grid;
    cfg.traffic.rho = 0.5;
    cfg.horizon = 3000;
    cfg.runs = 2;
    cfg.seed = 11;
    cfg.record_interval = 10;
    return cfg;
}

}  // namespace

TEST_CASE("zero arrivals keep queues at zero") {
    ConflictGraph g = ring9(2);
    ExperimentConfig cfg;
    cfg.topology_name = "ring9";
    cfg.scheduler.algorithm = Algorithm::dms;
    cfg.scheduler.W = 8;
    cfg.traffic.kind = TrafficSpec::Kind::bernoulli;
    cfg.traffic.rates = RateVector(9, 0.0);
    cfg.horizon = 2000;
    cfg.runs = 1;
    cfg.seed = 3;

    Metrics m = run_experiment(g, cfg);
    CHECK(m.avg_queue_mean == 0.0);
    for (const auto& p : m.runs[0].trace) CHECK(p.mean_queue == 0.0);
}

TEST_CASE("single always-served link stays near empty at rate 0.4") {
    ConflictGraph g = path_conflicts(1);
    ExperimentConfig cfg;
    cfg.topology_name = "single";
    cfg.scheduler.algorithm = Algorithm::gms;  // schedules the nonempty link every slot
    cfg.traffic.kind = TrafficSpec::Kind::bernoulli;
    cfg.traffic.rates = {0.4};
    cfg.horizon = 100000;
    cfg.runs = 3;
    cfg.seed = 1;

    Metrics m = run_experiment(g, cfg);
    for (const auto& r : m.runs) {
        CHECK(r.avg_queue < 1.0);
        CHECK_FALSE(r.fit.unstable);
    }
}

TEST_CASE("queue conservation and feasibility observed slot by slot") {
    ConflictGraph g = ring9(2);
    ExperimentConfig cfg;
    cfg.topology_name = "ring9";
    cfg.scheduler.algorithm = Algorithm::qcsma;
    cfg.scheduler.W = 4;
    cfg.traffic.kind = TrafficSpec::Kind::ring_adversarial;
    cfg.traffic.eps = 0.05;
    cfg.horizon = 3000;
    cfg.runs = 1;
    cfg.seed = 5;

    QueueVector prev(9, 0);
    long long checked = 0;
    auto observer = [&](long long t, const Schedule& x, const QueueVector& q) {
        CHECK(is_feasible(g, x));
        // q_i(t+1) - q_i(t) = arrivals - departures; departures <= min(1, q_i(t))
        for (int i = 0; i < 9; ++i) {
            long long delta = q[i] - prev[i];
            long long depart = x.test(i) && prev[i] > 0 ? 1 : 0;
            long long arrivals = delta + depart;
            CHECK(arrivals >= 0);
            CHECK(arrivals <= 2);
            CHECK(q[i] >= 0);
        }
        prev = q;
        ++checked;
        (void)t;
    };
    run_experiment(g, cfg, observer);
    CHECK(checked == 3000);
}

TEST_CASE("bit reproducibility of metrics and traces") {
    ConflictGraph g = grid24();
    ExperimentConfig cfg = small_grid_config();
    Metrics a = run_experiment(g, cfg);
    Metrics b = run_experiment(g, cfg);
    REQUIRE(a.runs.size() == b.runs.size());
    CHECK(a.avg_queue_mean == b.avg_queue_mean);
    for (std::size_t r = 0; r < a.runs.size(); ++r) {
        CHECK(a.runs[r].avg_queue == b.runs[r].avg_queue);
        REQUIRE(a.runs[r].trace.size() == b.runs[r].trace.size());
        for (std::size_t k = 0; k < a.runs[r].trace.size(); ++k)
            CHECK(a.runs[r].trace[k].mean_queue == b.runs[r].trace[k].mean_queue);
    }
    CHECK(metrics_csv(metrics_rows("qcsma", 0.5, cfg.horizon, a)) ==
          metrics_csv(metrics_rows("qcsma", 0.5, cfg.horizon, b)));

    Metrics c = run_experiment(g, [&] {
        ExperimentConfig alt = cfg;
        alt.seed += 1;
        return alt;
    }());
    CHECK(a.runs[0].avg_queue != c.runs[0].avg_queue);
}

TEST_CASE("stability slope verdicts") {
    std::vector<SlotTracePoint> flat, line, noisy;
    for (int k = 0; k < 1000; ++k) {
        long long t = 100 * (k + 1);
        flat.push_back({t, 5.0, 0});
        line.push_back({t, 0.01 * double(t), 0});
    }
    SlopeFit f1 = stability_slope(flat);
    CHECK(f1.slope == doctest::Approx(0.0));
    CHECK_FALSE(f1.unstable);

    SlopeFit f2 = stability_slope(line);
    CHECK(f2.slope == doctest::Approx(0.01));
    CHECK(f2.r2 == doctest::Approx(1.0));
    CHECK(f2.unstable);

    // pure noise: slope near zero, poor fit, stable verdict
    Rng rng(9);
    for (int k = 0; k < 1000; ++k)
        noisy.push_back({100 * (k + 1), 5.0 + uniform_unit(rng), 0});
    SlopeFit f3 = stability_slope(noisy);
    CHECK_FALSE(f3.unstable);

    std::vector<SlotTracePoint> tiny(10, SlotTracePoint{1, 0.0, 0});
    for (int k = 0; k < 10; ++k) tiny[k].t = k + 1;
    CHECK_THROWS_AS(stability_slope(tiny), DomainError);
}

TEST_CASE("overhead-adjusted capacity fraction") {
    CHECK(overhead_adjusted_capacity(952, 48) == doctest::Approx(0.952));
    CHECK(overhead_adjusted_capacity(100, 0) == doctest::Approx(1.0));
    CHECK(overhead_adjusted_capacity(48, 48) == doctest::Approx(0.5));
    CHECK_THROWS_AS(overhead_adjusted_capacity(0, 48), DomainError);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg = small_grid_config();
    cfg.horizon = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = small_grid_config();
    cfg.runs = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = small_grid_config();
    cfg.scheduler.W = 1;  // Q-CSMA requires W >= 2
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("cyclic policy requires the 9-link ring") {
    ConflictGraph g = grid24();
    ExperimentConfig cfg = small_grid_config();
    cfg.scheduler.algorithm = Algorithm::cyclic;
    CHECK_THROWS_AS(run_experiment(g, cfg), DomainError);
}

TEST_CASE("csv writers") {
    Metrics m;
    m.runs.push_back({11, 1.5, {0.001, 0.95, false}, {{100, 1.5, 3}, {200, 1.7, 4}}});
    m.runs.push_back({12, 2.5, {0.02, 0.99, true}, {{100, 2.5, 3}, {200, 2.7, 4}}});
    auto rows = metrics_rows("dgms", 0.9, 200, m);
    std::string csv = metrics_csv(rows);
    CHECK(csv == "algorithm,rho_or_eps,seed,horizon,avg_queue,slope,unstable_flag\n"
                 "dgms,0.9,11,200,1.5,0.001,0\n"
                 "dgms,0.9,12,200,2.5,0.02,1\n");

    auto mt = mean_trace(m);
    REQUIRE(mt.size() == 2);
    CHECK(mt[0].mean_queue == doctest::Approx(2.0));
    CHECK(samplepath_csv(mt) == "t,mean_queue\n100,2\n200,2.2\n");

    std::string sp = samplepath_sweep_csv({{"dgms", 0.9, mt}});
    CHECK(sp == "algorithm,rho_or_eps,t,mean_queue\ndgms,0.9,100,2\ndgms,0.9,200,2.2\n");
}
