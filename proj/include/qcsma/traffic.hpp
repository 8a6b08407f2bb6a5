#ifndef QCSMA_TRAFFIC_HPP
#define QCSMA_TRAFFIC_HPP

#include <string>
#include <vector>

#include "qcsma/core.hpp"

namespace qcsma {

/// Arrival-process selector, parsed from the [traffic] config section.
struct TrafficSpec {
    enum class Kind { bernoulli_grid, ring_adversarial, bernoulli, poisson };
    Kind kind = Kind::bernoulli_grid;
    double rho = 0.5;   // bernoulli_grid
    double eps = 0.0;   // ring_adversarial
    RateVector rates;   // bernoulli / poisson

    bool operator==(const TrafficSpec&) const = default;
};

std::string traffic_kind_name(TrafficSpec::Kind k);

/// Grid arrival rates: rho times the fixed convex combination of the four
/// maximum-size maximal schedules with coefficients (0.2, 0.3, 0.2, 0.3).
/// The unscaled vector sits on the capacity-region boundary by construction.
RateVector grid_rates(double rho);

/// Independent per-link coin flips.
std::vector<int> bernoulli_arrivals(const RateVector& rates, Rng& rng);

/// Ring pattern: in slot 9k+i one packet lands on links i and i+4 (cyclic,
/// 1-based), and with probability eps one extra packet lands on all 9 links
/// simultaneously (a single shared draw). Slot indices are 1-based.
std::vector<int> ring_arrivals(long long t, double eps, Rng& rng);

/// The two links loaded in slot t, as 0-based indices.
std::pair<int, int> ring_pattern_links(long long t);

std::vector<int> poisson_arrivals(const RateVector& rates, Rng& rng);

/// Uniform Kind-dispatched generator plus the long-run mean rates.
struct ArrivalProcess {
    TrafficSpec spec;

    std::vector<int> step(long long t, int n_links, Rng& rng) const;
    RateVector mean_rates(int n_links) const;

    /// The parameter an experiment sweeps (rho or eps; 0 otherwise).
    double sweep_value() const;
};

}  // namespace qcsma

#endif  // QCSMA_TRAFFIC_HPP
