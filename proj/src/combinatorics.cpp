#include "photonstats/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

#include "photonstats/errors.hpp"

namespace photonstats {

namespace {

std::mutex g_cache_mutex;

const std::vector<Integer>& factorial_table(int upto) {
    static std::vector<Integer> table{1};
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    while (static_cast<int>(table.size()) <= upto)
        table.push_back(table.back() * static_cast<int>(table.size()));
    return table;
}

}  // namespace

Integer factorial(int n) {
    if (n < 0) throw ValidationError("factorial: negative argument " + std::to_string(n));
    return factorial_table(n)[n];
}

Integer binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

std::vector<std::pair<int, int>> IntegerPartition::multiplicities() const {
    std::vector<std::pair<int, int>> out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (!out.empty() && out.back().first == *it)
            ++out.back().second;
        else
            out.emplace_back(*it, 1);
    }
    return out;
}

PartitionStats partition_stats(const IntegerPartition& lambda) {
    for (int p : lambda.parts)
        if (p <= 0) throw ValidationError("partition_stats: parts must be positive");
    if (!std::is_sorted(lambda.parts.rbegin(), lambda.parts.rend()))
        throw ValidationError("partition_stats: parts must be weakly decreasing");

    PartitionStats st;
    st.l = lambda.length();
    st.m_factorial = 1;
    Integer denom_d = 1;
    Integer denom_dp = 1;
    for (auto [j, r] : lambda.multiplicities()) {
        Integer rf = factorial(r);
        st.m_factorial *= rf;
        Integer jf_pow = 1;
        Integer j_pow = 1;
        for (int t = 0; t < r; ++t) {
            jf_pow *= factorial(j);
            j_pow *= j;
        }
        denom_d *= jf_pow * rf;
        denom_dp *= j_pow * rf;
    }
    Integer kf = factorial(lambda.k());
    st.d_coeff = kf / denom_d;
    st.dprime_coeff = kf / denom_dp;
    return st;
}

std::vector<IntegerPartition> enumerate_partitions(int k, int bound) {
    if (k < 0) throw ValidationError("enumerate_partitions: negative order");
    if (k > bound)
        throw BoundsError("enumerate_partitions: order " + std::to_string(k) +
                          " exceeds bound " + std::to_string(bound));
    std::vector<IntegerPartition> out;
    if (k == 0) {
        out.push_back(IntegerPartition{});
        return out;
    }
    // Descending-composition enumeration; natural order here is reverse-lex.
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rem, int maxpart) -> void {
        if (rem == 0) {
            out.push_back(IntegerPartition{cur});
            return;
        }
        for (int p = std::min(rem, maxpart); p >= 1; --p) {
            cur.push_back(p);
            self(self, rem - p, p);
            cur.pop_back();
        }
    };
    rec(rec, k, k);
    return out;
}

Integer stirling2(int n, int k, int bound) {
    if (n < 0 || k < 0) throw ValidationError("stirling2: negative argument");
    if (n > bound)
        throw BoundsError("stirling2: n " + std::to_string(n) + " exceeds bound " +
                          std::to_string(bound));
    if (k > n) return 0;
    if (n == 0) return 1;  // k == 0 == n
    if (k == 0) return 0;
    static std::vector<std::vector<Integer>> rows{{1}};  // rows[n][k], k <= n
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    while (static_cast<int>(rows.size()) <= n) {
        int m = static_cast<int>(rows.size());
        std::vector<Integer> row(m + 1);
        row[0] = 0;
        for (int j = 1; j < m; ++j) row[j] = Integer(j) * rows[m - 1][j] + rows[m - 1][j - 1];
        row[m] = 1;
        rows.push_back(std::move(row));
    }
    return rows[n][k];
}

std::vector<MultiIndexPartition> enumerate_multiindex_partitions(const MultiIndex& k,
                                                                 int bound) {
    if (k.empty()) throw ValidationError("multiindex partitions: empty index");
    for (int v : k)
        if (v < 0) throw ValidationError("multiindex partitions: negative component");
    if (mi_is_zero(k)) throw ValidationError("multiindex partitions: all-zero index");
    if (mi_total(k) > bound)
        throw BoundsError("multiindex partitions: |k| = " + std::to_string(mi_total(k)) +
                          " exceeds bound " + std::to_string(bound));

    // Choose multiplicities for candidate columns in ascending lex order; the
    // running remainder keeps the column multiset canonical by construction.
    std::vector<MultiIndex> cols;
    {
        MultiIndex c(k.size(), 0);
        while (mi_next_in_box(c, k)) cols.push_back(c);  // skips the zero column
    }
    std::sort(cols.begin(), cols.end());

    std::vector<MultiIndexPartition> out;
    MultiIndexPartition cur;
    auto rec = [&](auto&& self, std::size_t from, MultiIndex rem) -> void {
        if (mi_is_zero(rem)) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = from; i < cols.size(); ++i) {
            if (!mi_leq(cols[i], rem)) continue;
            MultiIndex r = rem;
            int mult = 0;
            cur.columns.push_back(cols[i]);
            cur.multiplicities.push_back(0);
            while (mi_leq(cols[i], r)) {
                r = mi_minus(r, cols[i]);
                ++mult;
                cur.multiplicities.back() = mult;
                self(self, i + 1, r);
            }
            cur.columns.pop_back();
            cur.multiplicities.pop_back();
        }
    };
    rec(rec, 0, k);
    return out;
}

Rational multiindex_coefficient(const MultiIndexPartition& lambda, const MultiIndex& k) {
    MultiIndex sum(k.size(), 0);
    Integer denom = 1;
    for (std::size_t i = 0; i < lambda.columns.size(); ++i) {
        const MultiIndex& c = lambda.columns[i];
        if (c.size() != k.size())
            throw ValidationError("multiindex_coefficient: dimension mismatch");
        int r = lambda.multiplicities[i];
        denom *= factorial(r);
        for (int t = 0; t < r; ++t) {
            sum = mi_plus(sum, c);
            for (int v : c) denom *= factorial(v);
        }
    }
    if (sum != k) throw ValidationError("multiindex_coefficient: partition does not sum to k");
    Integer numer = 1;
    for (int v : k) numer *= factorial(v);
    return Rational(numer, denom);
}

std::vector<CycleClass> enumerate_cycle_classes(int k, int bound) {
    if (k <= 0) throw ValidationError("enumerate_cycle_classes: order must be positive");
    if (k > bound)
        throw BoundsError("enumerate_cycle_classes: order " + std::to_string(k) +
                          " exceeds bound " + std::to_string(bound));
    std::vector<CycleClass> out;
    for (const auto& lam : enumerate_partitions(k))
        out.push_back(CycleClass{lam, partition_stats(lam).dprime_coeff});
    return out;
}

Integer bell_number(int k) {
    Integer b = 0;
    for (int j = 0; j <= k; ++j) b += stirling2(k, j);
    return b;
}

}  // namespace photonstats
