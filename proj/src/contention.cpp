#include "qcsma/contention.hpp"

#include <algorithm>
#include <numeric>

namespace qcsma {

ContentionOutcome resolve_contention(const ConflictGraph& g, const std::vector<int>& T,
                                     ControlEvent::Kind kind) {
    const int n = g.link_count();
    if (int(T.size()) != n) throw DimensionError("backoff vector length mismatch");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (T[a] != T[b]) return T[a] < T[b];
        return a < b;
    });

    ContentionOutcome out;
    out.winners = Schedule(n);
    Schedule silenced(n);

    std::size_t pos = 0;
    while (pos < order.size() && T[order[pos]] == kSilent) ++pos;  // kSilent = -1 sorts first
    // Links with T >= 0, grouped by mini-slot.
    for (std::size_t lo = pos; lo < order.size();) {
        std::size_t hi = lo;
        const int slot = T[order[lo]];
        while (hi < order.size() && T[order[hi]] == slot) ++hi;

        Schedule transmitters(n);
        for (std::size_t k = lo; k < hi; ++k) {
            int i = order[k];
            if (!silenced.test(i)) transmitters.set(i, true);
        }
        for (int i = 0; i < n; ++i) {
            if (!transmitters.test(i)) continue;
            bool collided = transmitters.intersects(g.conflict_mask(i));
            if (!collided) out.winners.set(i, true);
            out.events.push_back({slot, i, kind, collided});
        }
        // Anything heard from the conflict set keeps later links out.
        for (int i = 0; i < n; ++i)
            if (transmitters.test(i)) silenced = silenced | g.conflict_mask(i);

        lo = hi;
    }
    return out;
}

}  // namespace qcsma
