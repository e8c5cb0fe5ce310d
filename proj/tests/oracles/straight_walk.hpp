#pragma once

#include <algorithm>
#include <vector>

#include "twistlaw/origami.hpp"

namespace oracle {

// Square reached from each square after one period of the straight line through
// (1/2, 1/2 + 1/(2L)) in direction (p, q), q > 0 or (p, q) = (1, 0). Crossings of
// the vertical and horizontal unit lines are ordered by exact integer comparison;
// the offset keeps the line off every corner. Each cylinder of circumference c and
// height h shows up as h cycles of length c.
inline twistlaw::flat::Perm straight_walk(const twistlaw::flat::Origami& o, long p, long q) {
    const long ap = p < 0 ? -p : p;
    const long L = 2 * (ap + 1) * (q + 1);
    const auto hinv = twistlaw::flat::inverse(o.h);
    twistlaw::flat::Perm out(o.n);
    for (int s0 = 0; s0 < o.n; ++s0) {
        int s = s0;
        long j = 1, m = 1; // next vertical / horizontal crossing
        while (j <= ap || m <= q) {
            // vertical crossing j at t = (j - 1/2)/|p|, horizontal m at (m - 1/2 - 1/(2L))/q
            const bool vertical_first =
                m > q || (j <= ap && L * (2 * j - 1) * q < (L * (2 * m - 1) - 1) * ap);
            if (vertical_first) {
                s = p > 0 ? o.h[s] : hinv[s];
                ++j;
            } else {
                s = o.v[s];
                ++m;
            }
        }
        out[s0] = s;
    }
    return out;
}

// Sorted cycle lengths of the walk permutation.
inline std::vector<long> walk_cycle_type(const twistlaw::flat::Origami& o, long p, long q) {
    std::vector<long> out;
    for (const auto& c : twistlaw::flat::cycles(straight_walk(o, p, q))) out.push_back(static_cast<long>(c.size()));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace oracle
