#include "qcsma/traffic.hpp"

#include <cmath>

#include "qcsma/conflict_graph.hpp"

namespace qcsma {

std::string traffic_kind_name(TrafficSpec::Kind k) {
    switch (k) {
        case TrafficSpec::Kind::bernoulli_grid: return "bernoulli-grid";
        case TrafficSpec::Kind::ring_adversarial: return "ring-adversarial";
        case TrafficSpec::Kind::bernoulli: return "bernoulli";
        case TrafficSpec::Kind::poisson: return "poisson";
    }
    return "?";
}

RateVector grid_rates(double rho) {
    if (rho < 0.0 || rho > 1.0) throw DomainError("traffic intensity must lie in [0,1]");
    static const double c[4] = {0.2, 0.3, 0.2, 0.3};
    RateVector lambda(24, 0.0);
    const auto& sets = grid24_maximal_sets();
    for (int s = 0; s < 4; ++s)
        for (int id : sets[s]) lambda[id - 1] += rho * c[s];
    return lambda;
}

std::vector<int> bernoulli_arrivals(const RateVector& rates, Rng& rng) {
    std::vector<int> a(rates.size(), 0);
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (rates[i] < 0.0 || rates[i] > 1.0) throw DomainError("Bernoulli rate outside [0,1]");
        a[i] = uniform_unit(rng) < rates[i] ? 1 : 0;
    }
    return a;
}

std::pair<int, int> ring_pattern_links(long long t) {
    int i = int((t - 1) % 9);  // 0-based pattern index
    if (i < 0) i += 9;
    return {i, (i + 4) % 9};
}

std::vector<int> ring_arrivals(long long t, double eps, Rng& rng) {
    std::vector<int> a(9, 0);
    auto [u, v] = ring_pattern_links(t);
    a[u] += 1;
    a[v] += 1;
    bool extra = uniform_unit(rng) < eps;  // one shared draw for the whole slot
    if (extra)
        for (int i = 0; i < 9; ++i) a[i] += 1;
    return a;
}

std::vector<int> poisson_arrivals(const RateVector& rates, Rng& rng) {
    std::vector<int> a(rates.size(), 0);
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (rates[i] < 0.0) throw DomainError("Poisson rate must be nonnegative");
        // Knuth's product-of-uniforms method; rates here are order 1.
        double limit = std::exp(-rates[i]);
        int k = 0;
        double prod = 1.0;
        while (true) {
            prod *= uniform_unit(rng);
            if (prod <= limit) break;
            ++k;
        }
        a[i] = k;
    }
    return a;
}

std::vector<int> ArrivalProcess::step(long long t, int n_links, Rng& rng) const {
    switch (spec.kind) {
        case TrafficSpec::Kind::bernoulli_grid: {
            RateVector r = grid_rates(spec.rho);
            if (int(r.size()) != n_links) throw DimensionError("grid traffic needs 24 links");
            return bernoulli_arrivals(r, rng);
        }
        case TrafficSpec::Kind::ring_adversarial:
            if (n_links != 9) throw DimensionError("ring traffic needs 9 links");
            return ring_arrivals(t, spec.eps, rng);
        case TrafficSpec::Kind::bernoulli:
            if (int(spec.rates.size()) != n_links) throw DimensionError("rate vector length mismatch");
            return bernoulli_arrivals(spec.rates, rng);
        case TrafficSpec::Kind::poisson:
            if (int(spec.rates.size()) != n_links) throw DimensionError("rate vector length mismatch");
            return poisson_arrivals(spec.rates, rng);
    }
    throw DomainError("unknown traffic kind");
}

RateVector ArrivalProcess::mean_rates(int n_links) const {
    switch (spec.kind) {
        case TrafficSpec::Kind::bernoulli_grid:
            return grid_rates(spec.rho);
        case TrafficSpec::Kind::ring_adversarial:
            return RateVector(9, 2.0 / 9.0 + spec.eps);
        case TrafficSpec::Kind::bernoulli:
        case TrafficSpec::Kind::poisson:
            return spec.rates;
    }
    return RateVector(n_links, 0.0);
}

double ArrivalProcess::sweep_value() const {
    switch (spec.kind) {
        case TrafficSpec::Kind::bernoulli_grid: return spec.rho;
        case TrafficSpec::Kind::ring_adversarial: return spec.eps;
        default: return 0.0;
    }
}

}  // namespace qcsma
