#pragma once

#include <map>
#include <string>
#include <vector>

#include "photonstats/combinatorics.hpp"
#include "photonstats/errors.hpp"
#include "photonstats/multi_index.hpp"
#include "photonstats/rational.hpp"

namespace photonstats {

// Sequences are order-K prefixes: v[0] = a_1, ..., v[K-1] = a_K; a_0 = 1 implicit.
// T is Rational (exact mode) or double (float mode).

template <class T>
T scalar_from_integer(const Integer& n) {
    if constexpr (std::is_same_v<T, Rational>)
        return Rational(n);
    else
        return n.convert_to<T>();
}

template <class T>
T scalar_from_rational(const Rational& q) {
    if constexpr (std::is_same_v<T, Rational>)
        return q;
    else
        return to_double(q);
}

// prod over parts of lambda of v[part] (v 1-indexed prefix).
template <class T>
T partition_product(const IntegerPartition& lambda, const std::vector<T>& v) {
    T prod(1);
    for (int j : lambda.parts) {
        if (j > static_cast<int>(v.size()))
            throw CoverageError("sequence of order " + std::to_string(v.size()) +
                                " does not cover part " + std::to_string(j));
        prod = prod * v[j - 1];
    }
    return prod;
}

// Y_k(x_1..x_k) = sum over partitions of k of d_lambda * prod x_j^{r_j}.
template <class T>
T complete_bell(const std::vector<T>& x) {
    int k = static_cast<int>(x.size());
    T sum(0);
    for (const auto& lam : enumerate_partitions(k))
        sum = sum + scalar_from_integer<T>(partition_stats(lam).d_coeff) *
                        partition_product(lam, x);
    return sum;
}

// C_i(x_1..x_i) = sum over partitions of i of d'_lambda * prod x_j^{r_j}.
template <class T>
T cyclic_polynomial(const std::vector<T>& x) {
    int k = static_cast<int>(x.size());
    T sum(0);
    for (const auto& lam : enumerate_partitions(k))
        sum = sum + scalar_from_integer<T>(partition_stats(lam).dprime_coeff) *
                        partition_product(lam, x);
    return sum;
}

// a_n = sum_{j=1}^n binom(n-1, j-1) c_j a_{n-j}; identical to Y_n(c_1..c_n)
// but usable far beyond the partition enumeration bound.
template <class T>
std::vector<T> moments_from_cumulants(const std::vector<T>& c) {
    int K = static_cast<int>(c.size());
    std::vector<T> a0(static_cast<std::size_t>(K) + 1);  // includes a_0 = 1
    a0[0] = T(1);
    for (int n = 1; n <= K; ++n) {
        T s(0);
        for (int j = 1; j <= n; ++j)
            s = s + scalar_from_integer<T>(binomial(n - 1, j - 1)) * c[j - 1] * a0[n - j];
        a0[n] = s;
    }
    return std::vector<T>(a0.begin() + 1, a0.end());
}

template <class T>
std::vector<T> cumulants_from_moments(const std::vector<T>& a) {
    int K = static_cast<int>(a.size());
    std::vector<T> c(a.size());
    std::vector<T> a0(static_cast<std::size_t>(K) + 1);
    a0[0] = T(1);
    for (int n = 1; n <= K; ++n) a0[n] = a[n - 1];
    for (int n = 1; n <= K; ++n) {
        T s = a0[n];
        for (int j = 1; j < n; ++j)
            s = s - scalar_from_integer<T>(binomial(n - 1, j - 1)) * c[j - 1] * a0[n - j];
        c[n - 1] = s;
    }
    return c;
}

// f_k = sum over partitions of k of d_lambda a_{l(lambda)} prod [(-1)^{i-1}(i-1)!]^{r_i}.
template <class T>
std::vector<T> factorial_moments_from_moments(const std::vector<T>& a) {
    int K = static_cast<int>(a.size());
    std::vector<T> f(a.size());
    for (int k = 1; k <= K; ++k) {
        T s(0);
        for (const auto& lam : enumerate_partitions(k)) {
            auto st = partition_stats(lam);
            T w(1);
            for (int j : lam.parts) {
                T t = scalar_from_integer<T>(factorial(j - 1));
                if (j % 2 == 0) t = T(0) - t;
                w = w * t;
            }
            s = s + scalar_from_integer<T>(st.d_coeff) * a[st.l - 1] * w;
        }
        f[k - 1] = s;
    }
    return f;
}

// a_i = sum_k S(i,k) f_k via the Stirling expansion of x^i in falling factorials.
template <class T>
std::vector<T> moments_from_factorial_moments(const std::vector<T>& f) {
    int K = static_cast<int>(f.size());
    std::vector<T> a(f.size());
    for (int i = 1; i <= K; ++i) {
        T s(0);
        for (int k = 1; k <= i; ++k)
            s = s + scalar_from_integer<T>(stirling2(i, k)) * f[k - 1];
        a[i - 1] = s;
    }
    return a;
}

template <class T>
std::vector<T> factorial_cumulants_from_moments(const std::vector<T>& a) {
    return cumulants_from_moments(factorial_moments_from_moments(a));
}

// E[(gamma . alpha)^k] = sum over partitions of k of g_{l(lambda)} d_lambda c_lambda.
template <class T>
T generalized_random_sum_moment(const std::vector<T>& g, const std::vector<T>& c, int k) {
    if (k < 1) throw ValidationError("generalized_random_sum_moment: order must be positive");
    if (static_cast<int>(c.size()) < k)
        throw CoverageError("cumulant sequence shorter than requested order");
    T s(0);
    for (const auto& lam : enumerate_partitions(k)) {
        auto st = partition_stats(lam);
        if (st.l > static_cast<int>(g.size()))
            throw CoverageError("moment sequence shorter than partition length");
        s = s + g[st.l - 1] * scalar_from_integer<T>(st.d_coeff) * partition_product(lam, c);
    }
    return s;
}

template <class T>
std::vector<T> generalized_random_sum_moments(const std::vector<T>& g,
                                              const std::vector<T>& c, int K) {
    std::vector<T> out(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) out[k - 1] = generalized_random_sum_moment(g, c, k);
    return out;
}

// Complete table of values indexed by multi-index, 1 <= |k| <= K.
template <class T>
struct MultiTable {
    int d = 0;
    int K = 0;
    std::map<MultiIndex, T> values;

    const T& at(const MultiIndex& k) const {
        auto it = values.find(k);
        if (it == values.end())
            throw CoverageError("multi-index table does not cover requested index");
        return it->second;
    }
    bool covers(const MultiIndex& k) const { return values.count(k) != 0; }
};

template <class T>
MultiTable<T> make_multi_table(int d, int K) {
    if (d < 1) throw ValidationError("multi table: dimension must be positive");
    if (K < 1) throw ValidationError("multi table: order must be positive");
    MultiTable<T> t;
    t.d = d;
    t.K = K;
    return t;
}

template <class T>
T partition_product_mv(const MultiIndexPartition& lambda, const MultiTable<T>& table) {
    T prod(1);
    for (std::size_t i = 0; i < lambda.columns.size(); ++i)
        for (int r = 0; r < lambda.multiplicities[i]; ++r)
            prod = prod * table.at(lambda.columns[i]);
    return prod;
}

// sum over lambda |= k of k!/(m(lambda)! lambda!) g_{l(lambda)} c_lambda.
template <class T>
T mv_generalized_random_sum_moment(const std::vector<T>& g, const MultiTable<T>& c,
                                   const MultiIndex& k) {
    if (mi_total(k) > c.K) throw CoverageError("cumulant table does not cover |k|");
    T s(0);
    for (const auto& lam : enumerate_multiindex_partitions(k)) {
        int l = lam.length();
        if (l > static_cast<int>(g.size()))
            throw CoverageError("moment sequence shorter than partition length");
        s = s + scalar_from_rational<T>(multiindex_coefficient(lam, k)) * g[l - 1] *
                    partition_product_mv(lam, c);
    }
    return s;
}

// Moment table from cumulant table: the composition above with g identically 1.
template <class T>
MultiTable<T> mv_moments_from_cumulants(const MultiTable<T>& c) {
    MultiTable<T> a = make_multi_table<T>(c.d, c.K);
    std::vector<T> ones(static_cast<std::size_t>(c.K), T(1));
    mi_for_each_degree(c.d, c.K, [&](const MultiIndex& k) {
        if (mi_is_zero(k)) return;
        a.values[k] = mv_generalized_random_sum_moment(ones, c, k);
    });
    return a;
}

// Inverse with the (-1)^{l-1} (l-1)! weights.
template <class T>
MultiTable<T> mv_cumulants_from_moments(const MultiTable<T>& a) {
    MultiTable<T> c = make_multi_table<T>(a.d, a.K);
    std::vector<T> w(static_cast<std::size_t>(a.K));
    for (int l = 1; l <= a.K; ++l) {
        T t = scalar_from_integer<T>(factorial(l - 1));
        if (l % 2 == 0) t = T(0) - t;
        w[l - 1] = t;
    }
    mi_for_each_degree(a.d, a.K, [&](const MultiIndex& k) {
        if (mi_is_zero(k)) return;
        c.values[k] = mv_generalized_random_sum_moment(w, a, k);
    });
    return c;
}

}  // namespace photonstats
