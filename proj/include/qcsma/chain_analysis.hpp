#ifndef QCSMA_CHAIN_ANALYSIS_HPP
#define QCSMA_CHAIN_ANALYSIS_HPP

#include <functional>
#include <vector>

#include "qcsma/conflict_graph.hpp"
#include "qcsma/core.hpp"

namespace qcsma {

/// Per-link activation probabilities, strictly interior for chain analysis.
struct ActivationVector {
    std::vector<double> p;

    static ActivationVector uniform(int n, double value) {
        return ActivationVector{std::vector<double>(n, value)};
    }

    double odds(int i) const { return p[i] / (1.0 - p[i]); }

    /// Chain analysis requires 0 < p_i < 1 for every link.
    void require_interior() const;
};

/// Distribution over decision schedules: support m with probability alpha(m).
struct DecisionDistribution {
    std::vector<Schedule> support;
    std::vector<double> alpha;

    /// Probability of a given schedule (0 when outside the support).
    double probability(const Schedule& m) const;
    void check_invariants(const ConflictGraph& g) const;
};

/// Small dense row-major matrix; plenty for the enumerable state spaces here.
struct Matrix {
    int n = 0;
    std::vector<double> a;

    explicit Matrix(int n_ = 0) : n(n_), a(std::size_t(n_) * n_, 0.0) {}
    double& at(int i, int j) { return a[std::size_t(i) * n + j]; }
    double at(int i, int j) const { return a[std::size_t(i) * n + j]; }
};

/// Enumerated schedule chain: states in ascending Schedule order, the
/// one-step transition matrix, and the product-form stationary law.
struct ChainModel {
    std::vector<Schedule> states;
    Matrix P;
    std::vector<double> pi;
    double Z = 0.0;
    double log_Z = 0.0;

    int state_index(const Schedule& x) const;  // -1 when x is not a state
};

/// Exact decision-schedule distribution of Q-CSMA with window W, obtained by
/// enumerating all W^|E| backoff vectors and resolving INTENT contention on
/// each: a link joins m when it transmits strictly before every conflicting
/// transmitter; simultaneous conflicting INTENTs collide; any transmission
/// heard from the conflict set silences a link that has not yet transmitted.
/// Ties between non-conflicting links do not interact.
DecisionDistribution qcsma_decision_distribution(const ConflictGraph& g, int W,
                                                 double cap = 1e8);

/// One-step transition probability between feasible schedules: zero unless
/// their union is feasible and some decision schedule covers the symmetric
/// difference; otherwise the exact sum over covering decision schedules of
/// the per-link activation/deactivation products.
double transition_probability(const ConflictGraph& g, const Schedule& x, const Schedule& x2,
                              const DecisionDistribution& dd, const ActivationVector& p);

/// Full chain over the feasible schedules. Off-diagonal entries come from
/// transition_probability; each diagonal is completed to make the row sum 1
/// and cross-checked against the direct evaluation at x2 = x.
ChainModel build_chain(const ConflictGraph& g, const DecisionDistribution& dd,
                       const ActivationVector& p, int cap = kDefaultEnumerationCap);

struct StationaryResult {
    std::vector<double> pi;  // aligned with enumerate_feasible order
    double Z;
    double log_Z;
};

/// pi(x) proportional to the product of odds p_i/(1-p_i) over i in x,
/// normalized over all feasible schedules. Computed in log space.
StationaryResult product_form_stationary(const ConflictGraph& g, const ActivationVector& p,
                                         int cap = kDefaultEnumerationCap);

/// Max over state pairs of |pi(x)P(x,y) - pi(y)P(y,x)|.
double check_detailed_balance(const ChainModel& cm);

/// ||pi P - pi||_inf.
double stationarity_residual(const ChainModel& cm);

/// True iff the union of the support equals the whole link set.
bool check_irreducibility(const DecisionDistribution& dd, const ConflictGraph& g);

struct ConcentrationResult {
    double exact_mass;  // stationary mass of schedules below (1-eps) max weight
    double bound;       // 2^|E| * exp(-eps * max weight)
    double max_weight;
};

/// Under pi(x) proportional to exp(sum of weights in x): exact probability of
/// the set of schedules with weight below (1-eps) of the maximum, and the
/// counting bound it must stay under.
ConcentrationResult weight_concentration(const ConflictGraph& g,
                                         const std::vector<double>& weights, double eps,
                                         int cap = kDefaultEnumerationCap);

/// One scheduler transition: previous transmission schedule to the next.
using StepFn = std::function<Schedule(const Schedule& x_prev, Rng& rng)>;

/// State-occupancy frequencies of a single trajectory started from the empty
/// schedule, aligned with enumerate_feasible order.
std::vector<double> empirical_stationary(const ConflictGraph& g, const StepFn& step,
                                         long long slots, std::uint64_t seed,
                                         int cap = kDefaultEnumerationCap);

/// Total variation distance between two distributions on the same index set.
double total_variation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace qcsma

#endif  // QCSMA_CHAIN_ANALYSIS_HPP
