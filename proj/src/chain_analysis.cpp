#include "qcsma/chain_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "qcsma/contention.hpp"

namespace qcsma {

void ActivationVector::require_interior() const {
    for (double v : p)
        if (!(v > 0.0 && v < 1.0))
            throw DomainError("activation probability " + std::to_string(v) +
                              " is not strictly inside (0,1)");
}

double DecisionDistribution::probability(const Schedule& m) const {
    for (std::size_t k = 0; k < support.size(); ++k)
        if (support[k] == m) return alpha[k];
    return 0.0;
}

void DecisionDistribution::check_invariants(const ConflictGraph& g) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (!is_feasible(g, support[k]))
            throw InternalConsistencyError("infeasible decision schedule in support");
        if (!(alpha[k] > 0.0))
            throw InternalConsistencyError("non-positive alpha on support");
        sum += alpha[k];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw InternalConsistencyError("decision distribution sums to " + std::to_string(sum));
}

int ChainModel::state_index(const Schedule& x) const {
    auto it = std::lower_bound(states.begin(), states.end(), x);
    if (it == states.end() || !(*it == x)) return -1;
    return int(it - states.begin());
}

DecisionDistribution qcsma_decision_distribution(const ConflictGraph& g, int W, double cap) {
    const int n = g.link_count();
    if (W < 1) throw DomainError("window size must be >= 1");
    if (std::pow(double(W), double(n)) > cap)
        throw EnumerationCapError("W^|E| = " + std::to_string(W) + "^" + std::to_string(n) +
                                  " exceeds the enumeration cap; use Monte Carlo estimation");

    std::map<Schedule, long long> counts;
    std::vector<int> T(n, 0);
    long long total = 0;
    while (true) {
        ContentionOutcome c = resolve_contention(g, T, ControlEvent::Kind::intent);
        ++counts[c.winners];
        ++total;
        int d = 0;  // odometer over the W^n backoff vectors
        while (d < n && ++T[d] == W) T[d++] = 0;
        if (d == n) break;
    }

    DecisionDistribution dd;
    for (const auto& [m, cnt] : counts) {
        dd.support.push_back(m);
        dd.alpha.push_back(double(cnt) / double(total));
    }
    dd.check_invariants(g);
    return dd;
}

double transition_probability(const ConflictGraph& g, const Schedule& x, const Schedule& x2,
                              const DecisionDistribution& dd, const ActivationVector& p) {
    if (!is_feasible(g, x) || !is_feasible(g, x2))
        throw DomainError("transition between infeasible schedules");
    p.require_interior();

    const Schedule uni = x | x2;
    if (!is_feasible(g, uni)) return 0.0;
    const Schedule delta = x ^ x2;
    const Schedule both = x & x2;
    const Schedule blocked = g.conflict_neighborhood(uni);

    const int n = g.link_count();
    double total = 0.0;
    for (std::size_t k = 0; k < dd.support.size(); ++k) {
        const Schedule& m = dd.support[k];
        if (!delta.is_subset_of(m)) continue;
        double term = dd.alpha[k];
        for (int i = 0; i < n; ++i) {
            if (x.test(i) && !x2.test(i))
                term *= 1.0 - p.p[i];  // turned off
            else if (x2.test(i) && !x.test(i))
                term *= p.p[i];  // turned on
            else if (m.test(i) && both.test(i))
                term *= p.p[i];  // re-decided to stay on
            else if (m.test(i) && !uni.test(i) && !blocked.test(i))
                term *= 1.0 - p.p[i];  // free link decided to stay off
        }
        total += term;
    }
    return total;
}

ChainModel build_chain(const ConflictGraph& g, const DecisionDistribution& dd,
                       const ActivationVector& p, int cap) {
    ChainModel cm;
    cm.states = enumerate_feasible(g, cap);
    const int m = int(cm.states.size());
    cm.P = Matrix(m);

    for (int i = 0; i < m; ++i) {
        double off_sum = 0.0;
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            double v = transition_probability(g, cm.states[i], cm.states[j], dd, p);
            cm.P.at(i, j) = v;
            off_sum += v;
        }
        double direct_diag = transition_probability(g, cm.states[i], cm.states[i], dd, p);
        if (std::abs(off_sum + direct_diag - 1.0) > 1e-9)
            throw InternalConsistencyError("row " + std::to_string(i) + " sums to " +
                                           std::to_string(off_sum + direct_diag) +
                                           " before diagonal completion");
        cm.P.at(i, i) = 1.0 - off_sum;
    }

    StationaryResult st = product_form_stationary(g, p, cap);
    cm.pi = std::move(st.pi);
    cm.Z = st.Z;
    cm.log_Z = st.log_Z;
    return cm;
}

namespace {

double log_sum_exp(const std::vector<double>& v) {
    double mx = -HUGE_VAL;
    for (double x : v) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

}  // namespace

StationaryResult product_form_stationary(const ConflictGraph& g, const ActivationVector& p,
                                         int cap) {
    p.require_interior();
    auto states = enumerate_feasible(g, cap);
    std::vector<double> logw(states.size(), 0.0);
    std::vector<double> log_odds(g.link_count());
    for (int i = 0; i < g.link_count(); ++i) log_odds[i] = std::log(p.p[i]) - std::log1p(-p.p[i]);

    for (std::size_t s = 0; s < states.size(); ++s)
        for (int i = 0; i < g.link_count(); ++i)
            if (states[s].test(i)) logw[s] += log_odds[i];

    StationaryResult r;
    r.log_Z = log_sum_exp(logw);
    r.Z = std::exp(r.log_Z);
    r.pi.resize(states.size());
    for (std::size_t s = 0; s < states.size(); ++s) r.pi[s] = std::exp(logw[s] - r.log_Z);
    return r;
}

double check_detailed_balance(const ChainModel& cm) {
    double worst = 0.0;
    for (int i = 0; i < cm.P.n; ++i)
        for (int j = i + 1; j < cm.P.n; ++j)
            worst = std::max(worst,
                             std::abs(cm.pi[i] * cm.P.at(i, j) - cm.pi[j] * cm.P.at(j, i)));
    return worst;
}

double stationarity_residual(const ChainModel& cm) {
    double worst = 0.0;
    for (int j = 0; j < cm.P.n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < cm.P.n; ++i) acc += cm.pi[i] * cm.P.at(i, j);
        worst = std::max(worst, std::abs(acc - cm.pi[j]));
    }
    return worst;
}

bool check_irreducibility(const DecisionDistribution& dd, const ConflictGraph& g) {
    Schedule covered(g.link_count());
    for (const Schedule& m : dd.support) covered = covered | m;
    return covered.count() == g.link_count();
}

ConcentrationResult weight_concentration(const ConflictGraph& g,
                                         const std::vector<double>& weights, double eps,
                                         int cap) {
    if (int(weights.size()) != g.link_count()) throw DimensionError("weight vector length mismatch");
    auto states = enumerate_feasible(g, cap);
    std::vector<double> logw(states.size(), 0.0);
    for (std::size_t s = 0; s < states.size(); ++s)
        for (int i = 0; i < g.link_count(); ++i)
            if (states[s].test(i)) logw[s] += weights[i];

    double w_star = *std::max_element(logw.begin(), logw.end());
    double threshold = (1.0 - eps) * w_star;

    std::vector<double> bad;
    for (double w : logw)
        if (w < threshold) bad.push_back(w);

    ConcentrationResult r;
    r.max_weight = w_star;
    double log_Z = log_sum_exp(logw);
    r.exact_mass = bad.empty() ? 0.0 : std::exp(log_sum_exp(bad) - log_Z);
    r.bound = std::exp(g.link_count() * std::log(2.0) - eps * w_star);
    return r;
}

std::vector<double> empirical_stationary(const ConflictGraph& g, const StepFn& step,
                                         long long slots, std::uint64_t seed, int cap) {
    auto states = enumerate_feasible(g, cap);
    std::map<Schedule, int> index;
    for (std::size_t s = 0; s < states.size(); ++s) index[states[s]] = int(s);

    std::vector<long long> counts(states.size(), 0);
    Rng rng(seed);
    Schedule x(g.link_count());
    for (long long t = 0; t < slots; ++t) {
        x = step(x, rng);
        auto it = index.find(x);
        if (it == index.end())
            throw InternalConsistencyError("trajectory reached infeasible schedule " + x.to_string());
        ++counts[it->second];
    }
    std::vector<double> freq(states.size());
    for (std::size_t s = 0; s < states.size(); ++s) freq[s] = double(counts[s]) / double(slots);
    return freq;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimensionError("distribution size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
}

}  // namespace qcsma
