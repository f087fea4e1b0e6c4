#pragma once

#include <numeric>
#include <vector>

#include "photonstats/rational.hpp"

namespace photonstats {

// Componentwise nonnegative integer vector indexing pixels.
using MultiIndex = std::vector<int>;

inline int mi_total(const MultiIndex& k) {
    return std::accumulate(k.begin(), k.end(), 0);
}

inline bool mi_leq(const MultiIndex& a, const MultiIndex& b) {
    for (size_t j = 0; j < a.size(); ++j)
        if (a[j] > b[j]) return false;
    return true;
}

inline MultiIndex mi_minus(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r(a.size());
    for (size_t j = 0; j < a.size(); ++j) r[j] = a[j] - b[j];
    return r;
}

inline MultiIndex mi_plus(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r(a.size());
    for (size_t j = 0; j < a.size(); ++j) r[j] = a[j] + b[j];
    return r;
}

inline bool mi_is_zero(const MultiIndex& k) {
    for (int v : k)
        if (v != 0) return false;
    return true;
}

// Odometer step through the box {0..limit[0]} x ... x {0..limit[d-1]}.
// Returns false when the box is exhausted; `cur` starts at all zeros.
inline bool mi_next_in_box(MultiIndex& cur, const MultiIndex& limit) {
    for (size_t j = 0; j < cur.size(); ++j) {
        if (cur[j] < limit[j]) {
            ++cur[j];
            for (size_t i = 0; i < j; ++i) cur[i] = 0;
            return true;
        }
    }
    return false;
}

// All indices t <= limit componentwise, in odometer order, first coordinate fastest.
template <class Fn>
void mi_for_each_in_box(const MultiIndex& limit, Fn&& fn) {
    MultiIndex cur(limit.size(), 0);
    fn(static_cast<const MultiIndex&>(cur));
    while (mi_next_in_box(cur, limit)) fn(static_cast<const MultiIndex&>(cur));
}

// All indices of dimension d with total degree <= max_total, graded order
// (ascending total, lexicographic within each total).
template <class Fn>
void mi_for_each_degree(int d, int max_total, Fn&& fn) {
    if (d < 1) return;
    MultiIndex cur(d, 0);
    auto rec = [&](auto&& self, int coord, int rem) -> void {
        if (coord == d - 1) {
            cur[coord] = rem;
            fn(static_cast<const MultiIndex&>(cur));
            cur[coord] = 0;
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            cur[coord] = v;
            self(self, coord + 1, rem - v);
        }
        cur[coord] = 0;
    };
    for (int total = 0; total <= max_total; ++total) rec(rec, 0, total);
}

}  // namespace photonstats
