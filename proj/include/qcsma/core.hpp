#ifndef QCSMA_CORE_HPP
#define QCSMA_CORE_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcsma {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Schedule/graph size disagreement.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Instance too large for exhaustive enumeration.
struct EnumerationCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed network description (dangling endpoints, asymmetric hearing, ...).
struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A cross-check inside an algorithm failed; indicates a bug, not bad input.
struct InternalConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Config-file problem, carries the 1-based line number (0 = whole file).
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& msg)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg : msg),
          line(line_) {}
};

// ---------------------------------------------------------------------------
// Schedule: a bit vector over links
// ---------------------------------------------------------------------------

/// Set of links, stored as a dynamic bitset. Link index 0 is the lowest bit,
/// so the ordering induced by operator< enumerates schedules as ascending
/// integers with link 1 in the least-significant position.
class Schedule {
public:
    Schedule() = default;
    explicit Schedule(int n_links) : n_(n_links), words_((n_links + 63) / 64, 0) {}

    static Schedule from_mask(int n_links, std::uint64_t mask) {
        Schedule s(n_links);
        if (!s.words_.empty()) s.words_[0] = mask;
        return s;
    }

    /// Build from 1-based link ids (the labeling used in all I/O).
    static Schedule from_links1(int n_links, const std::vector<int>& ids) {
        Schedule s(n_links);
        for (int id : ids) {
            if (id < 1 || id > n_links)
                throw DimensionError("link id " + std::to_string(id) + " out of range 1.." +
                                     std::to_string(n_links));
            s.set(id - 1, true);
        }
        return s;
    }

    int size() const { return n_; }

    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void set(int i, bool v) {
        std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= bit;
        else
            words_[i >> 6] &= ~bit;
    }

    int count() const {
        int c = 0;
        for (auto w : words_) c += __builtin_popcountll(w);
        return c;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    bool none() const { return !any(); }

    bool intersects(const Schedule& o) const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & o.words_[k]) return true;
        return false;
    }

    bool is_subset_of(const Schedule& o) const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~o.words_[k]) return false;
        return true;
    }

    Schedule operator|(const Schedule& o) const {
        Schedule r = *this;
        for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] |= o.words_[k];
        return r;
    }

    Schedule operator&(const Schedule& o) const {
        Schedule r = *this;
        for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= o.words_[k];
        return r;
    }

    /// Set difference: bits of *this not in o.
    Schedule minus(const Schedule& o) const {
        Schedule r = *this;
        for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= ~o.words_[k];
        return r;
    }

    Schedule operator^(const Schedule& o) const {
        Schedule r = *this;
        for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] ^= o.words_[k];
        return r;
    }

    bool operator==(const Schedule& o) const { return n_ == o.n_ && words_ == o.words_; }
    bool operator!=(const Schedule& o) const { return !(*this == o); }

    bool operator<(const Schedule& o) const {
        for (std::size_t k = words_.size(); k-- > 0;)
            if (words_[k] != o.words_[k]) return words_[k] < o.words_[k];
        return false;
    }

    std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

    /// 1-based ids of the set bits, ascending.
    std::vector<int> links1() const {
        std::vector<int> out;
        for (int i = 0; i < n_; ++i)
            if (test(i)) out.push_back(i + 1);
        return out;
    }

    /// "{1,4,7}" rendering with 1-based ids.
    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int id : links1()) {
            if (!first) s += ",";
            s += std::to_string(id);
            first = false;
        }
        return s + "}";
    }

private:
    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

using QueueVector = std::vector<long long>;
using RateVector = std::vector<double>;

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

using Rng = std::mt19937_64;

/// Unbiased integer in [0, n). Rejection sampling so the draw sequence is
/// identical on every platform (std::uniform_int_distribution is not).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

}  // namespace qcsma

#endif  // QCSMA_CORE_HPP
