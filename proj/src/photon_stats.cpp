#include "photonstats/photon_stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "photonstats/combinatorics.hpp"
#include "photonstats/errors.hpp"

namespace photonstats {

namespace {

Integer mi_factorial(const MultiIndex& k) {
    Integer f = 1;
    for (int v : k) f *= factorial(v);
    return f;
}

// Alternating series sum(t) (-1)^t b[t], b >= 0, summed exactly.
struct ExactSeries {
    Rational value;
    double last_mag = 0.0;
    bool converged = false;
};

ExactSeries alternating_plain(const std::vector<Rational>& b, double tol) {
    ExactSeries r;
    for (std::size_t t = 0; t < b.size(); ++t) {
        if (t % 2 == 0)
            r.value += b[t];
        else
            r.value -= b[t];
    }
    if (!b.empty()) r.last_mag = std::abs(to_double(b.back()));
    r.converged = r.last_mag < tol;
    return r;
}

// Euler transformation: sum(j) e_j with e_j = sum(t<=j) C(j,t) (-b)^t / 2^{j+1};
// the tail decays geometrically whenever the mixing distribution has a finite
// exponential-square-root moment, which covers every model this library builds.
ExactSeries alternating_euler(const std::vector<Rational>& b, double tol) {
    ExactSeries r;
    Rational ej;
    for (std::size_t j = 0; j < b.size(); ++j) {
        ej = 0;
        for (std::size_t t = 0; t <= j; ++t) {
            Rational term = Rational(binomial(static_cast<int>(j), static_cast<int>(t))) * b[t];
            if (t % 2 == 0)
                ej += term;
            else
                ej -= term;
        }
        ej /= rational_pow(Rational(2), static_cast<int>(j) + 1);
        r.value += ej;
    }
    if (!b.empty()) r.last_mag = std::abs(to_double(ej));
    r.converged = r.last_mag < tol;
    return r;
}

ExactSeries alternating_sum(const std::vector<Rational>& b, SeriesAccel accel, double tol) {
    return accel == SeriesAccel::euler ? alternating_euler(b, tol)
                                       : alternating_plain(b, tol);
}

}  // namespace

std::vector<Rational> CountModel::moments(int K) const {
    if (K < 1) throw ValidationError("count model: order must be positive");
    switch (kind) {
        case Kind::deterministic: {
            std::vector<Rational> m(static_cast<std::size_t>(K));
            for (int k = 1; k <= K; ++k) m[k - 1] = rational_pow(Rational(p), k);
            return m;
        }
        case Kind::poisson:
            return moments_from_cumulants(std::vector<Rational>(static_cast<std::size_t>(K), mu));
        case Kind::custom:
        default:
            if (K > static_cast<int>(custom_moments.size()))
                throw CoverageError("count model: declared moment prefix covers order " +
                                    std::to_string(custom_moments.size()) +
                                    ", requested " + std::to_string(K));
            return std::vector<Rational>(custom_moments.begin(), custom_moments.begin() + K);
    }
}

std::vector<Rational> CountModel::cumulants(int K) const {
    if (kind == Kind::poisson) {
        if (K < 1) throw ValidationError("count model: order must be positive");
        return std::vector<Rational>(static_cast<std::size_t>(K), mu);
    }
    return cumulants_from_moments(moments(K));
}

CountModel count_deterministic(int p) {
    if (p < 1) throw ValidationError("count model: deterministic wave count must be >= 1");
    CountModel c;
    c.kind = CountModel::Kind::deterministic;
    c.p = p;
    return c;
}

CountModel count_poisson(double mu) {
    if (!(mu >= 0))
        throw ValidationError("count model: poisson rate must be nonnegative");
    CountModel c;
    c.kind = CountModel::Kind::poisson;
    c.mu = rational_from_double(mu);
    return c;
}

CountModel count_custom(const std::vector<double>& moments) {
    if (moments.empty())
        throw ValidationError("count model: custom moment prefix must be nonempty");
    CountModel c;
    c.kind = CountModel::Kind::custom;
    for (double v : moments) c.custom_moments.push_back(rational_from_double(v));
    return c;
}

Rational overall_factorial_moment_exact(const WishartModel& model, int i) {
    if (i < 1) throw ValidationError("overall factorial moment: order must be positive");
    return trace_moment_exact(model, i);
}

double overall_factorial_moment(const WishartModel& model, int i) {
    return to_double(overall_factorial_moment_exact(model, i));
}

Rational overall_moment_exact(const WishartModel& model, int i) {
    if (i < 1) throw ValidationError("overall moment: order must be positive");
    if (i > kMaxPartitionOrder)
        throw BoundsError("overall moment: order exceeds bound");
    auto tm = trace_moments_exact(model, i);
    Rational s = 0;
    for (int k = 1; k <= i; ++k) s += Rational(stirling2(i, k)) * tm[k - 1];
    return s;
}

double overall_moment(const WishartModel& model, int i) {
    return to_double(overall_moment_exact(model, i));
}

Rational overall_cumulant_exact(const WishartModel& model, int k) {
    if (k < 1) throw ValidationError("overall cumulant: order must be positive");
    if (k > kMaxPartitionOrder)
        throw BoundsError("overall cumulant: order exceeds bound");
    Rational s = 0;
    for (int i = 1; i <= k; ++i)
        s += Rational(stirling2(k, i)) * trace_cumulant_exact(model, i);
    return s;
}

double overall_cumulant(const WishartModel& model, int k) {
    return to_double(overall_cumulant_exact(model, k));
}

Rational overall_factorial_cumulant_exact(const WishartModel& model, int k) {
    if (k < 1) throw ValidationError("overall factorial cumulant: order must be positive");
    if (k > kMaxPartitionOrder)
        throw BoundsError("overall factorial cumulant: order exceeds bound");
    return trace_cumulant_exact(model, k);
}

double overall_factorial_cumulant(const WishartModel& model, int k) {
    return to_double(overall_factorial_cumulant_exact(model, k));
}

SeriesResult overall_pmf(const WishartModel& model, int k, int truncation, SeriesAccel accel,
                         double tol) {
    if (k < 0) throw ValidationError("pmf: count must be nonnegative");
    if (truncation < 0) throw ValidationError("pmf: truncation must be nonnegative");
    auto moments = trace_moments_exact(model, k + truncation);
    Rational kfac(factorial(k));
    std::vector<Rational> b(static_cast<std::size_t>(truncation) + 1);
    for (int t = 0; t <= truncation; ++t) {
        Rational num = (k + t == 0) ? Rational(1) : moments[k + t - 1];
        b[t] = num / (kfac * Rational(factorial(t)));
    }
    auto s = alternating_sum(b, accel, tol);
    SeriesResult r;
    r.value = to_double(s.value);
    r.truncation_order = truncation;
    r.last_term_magnitude = s.last_mag;
    r.accelerated = accel == SeriesAccel::euler;
    r.converged = s.converged;
    return r;
}

namespace {

void check_count_index(const WishartModel& model, const MultiIndex& k) {
    if (static_cast<int>(k.size()) != model.d)
        throw ValidationError("joint statistic: index dimension mismatch");
    for (int v : k)
        if (v < 0) throw ValidationError("joint statistic: negative index component");
}

// E[prod_j N_j^{k_j}] for one model via the Stirling expansion of each power
// into intensity moments. Pixels with k_j = 0 contribute the factor E[N^0]:
// 1 under marginalize, 0 under the formal convention.
Rational count_moment(const WishartModel& model, const MultiIndex& k, ZeroPolicy policy,
                      int bound) {
    check_count_index(model, k);
    if (policy == ZeroPolicy::formal) {
        for (int v : k)
            if (v == 0) return Rational(0);
    }
    if (mi_is_zero(k)) return Rational(1);
    if (mi_total(k) > bound)
        throw BoundsError("joint statistic: |k| exceeds bound " + std::to_string(bound));

    // Odometer over i with 1 <= i_j <= k_j on active pixels, i_j = 0 elsewhere.
    std::vector<int> active;
    for (std::size_t j = 0; j < k.size(); ++j)
        if (k[j] > 0) active.push_back(static_cast<int>(j));
    MultiIndex iv(k.size(), 0);
    for (int j : active) iv[j] = 1;
    Rational total = 0;
    for (;;) {
        Rational coeff = 1;
        for (int j : active) coeff *= Rational(stirling2(k[j], iv[j]));
        total += coeff * joint_intensity_moment_exact(model, iv, bound);
        std::size_t pos = 0;
        while (pos < active.size()) {
            int j = active[pos];
            if (iv[j] < k[j]) {
                ++iv[j];
                break;
            }
            iv[j] = 1;
            ++pos;
        }
        if (pos == active.size()) break;
    }
    return total;
}

}  // namespace

Rational joint_moment_exact(const WishartModel& model, const MultiIndex& k, ZeroPolicy policy,
                            int bound) {
    return count_moment(model, k, policy, bound);
}

double joint_moment(const WishartModel& model, const MultiIndex& k, ZeroPolicy policy,
                    int bound) {
    return to_double(joint_moment_exact(model, k, policy, bound));
}

Rational joint_factorial_moment_exact(const WishartModel& model, const MultiIndex& k,
                                      int bound) {
    check_count_index(model, k);
    return joint_intensity_moment_exact(model, k, bound);
}

double joint_factorial_moment(const WishartModel& model, const MultiIndex& k, int bound) {
    return to_double(joint_factorial_moment_exact(model, k, bound));
}

Rational joint_cumulant_exact(const WishartModel& model, const MultiIndex& k,
                              JointCumulantPolicy policy, int bound) {
    check_count_index(model, k);
    if (mi_is_zero(k)) throw ValidationError("joint cumulant: all-zero index");
    if (mi_total(k) > bound)
        throw BoundsError("joint cumulant: |k| exceeds bound " + std::to_string(bound));

    // Additivity over waves; identical means share one evaluation.
    ZeroPolicy column_policy =
        policy == JointCumulantPolicy::standard ? ZeroPolicy::marginalize : ZeroPolicy::formal;
    std::vector<std::pair<WishartModel, int>> groups;
    if (model.has_means()) {
        for (int i = 1; i <= model.p; ++i) {
            bool merged = false;
            for (auto& [w, count] : groups) {
                if (w.means[0] == model.means[i - 1]) {
                    ++count;
                    merged = true;
                    break;
                }
            }
            if (!merged) groups.emplace_back(single_wave(model, i), 1);
        }
    } else {
        groups.emplace_back(single_wave(model, 1), model.p);
    }

    Rational total = 0;
    for (const auto& [wave, count] : groups) {
        Rational cum = 0;
        for (const auto& lam : enumerate_multiindex_partitions(k)) {
            int l = lam.length();
            Rational w = multiindex_coefficient(lam, k) * Rational(factorial(l - 1));
            if (l % 2 == 0) w = -w;
            Rational prod = 1;
            for (std::size_t s = 0; s < lam.columns.size() && prod != 0; ++s)
                prod *= rational_pow(
                    count_moment(wave, lam.columns[s], column_policy, bound),
                    lam.multiplicities[s]);
            cum += w * prod;
        }
        total += Rational(count) * cum;
    }
    return total;
}

double joint_cumulant(const WishartModel& model, const MultiIndex& k,
                      JointCumulantPolicy policy, int bound) {
    return to_double(joint_cumulant_exact(model, k, policy, bound));
}

Rational joint_factorial_cumulant_exact(const WishartModel& model, const MultiIndex& k,
                                        int bound) {
    check_count_index(model, k);
    return joint_intensity_cumulant_exact(model, k, bound);
}

double joint_factorial_cumulant(const WishartModel& model, const MultiIndex& k, int bound) {
    return to_double(joint_factorial_cumulant_exact(model, k, bound));
}

SeriesResult joint_pmf_series(const WishartModel& model, const MultiIndex& k, int truncation,
                              SeriesAccel accel, double tol, int bound) {
    check_count_index(model, k);
    if (truncation < 0) throw ValidationError("pmf: truncation must be nonnegative");
    if (mi_total(k) + truncation > bound)
        throw BoundsError("joint pmf: |k| + truncation exceeds bound " + std::to_string(bound) +
                          "; raise the joint order bound");
    const int d = model.d;
    Rational kfac(mi_factorial(k));
    // Group terms by total degree |j|; each group is one alternating-series term.
    std::vector<Rational> b(static_cast<std::size_t>(truncation) + 1);
    mi_for_each_degree(d, truncation, [&](const MultiIndex& j) {
        Rational m = joint_intensity_moment_exact(model, mi_plus(j, k), bound);
        b[mi_total(j)] += m / (kfac * Rational(mi_factorial(j)));
    });
    auto s = alternating_sum(b, accel, tol);
    SeriesResult r;
    r.value = to_double(s.value);
    r.truncation_order = truncation;
    r.last_term_magnitude = s.last_mag;
    r.accelerated = accel == SeriesAccel::euler;
    r.converged = s.converged;
    return r;
}

namespace {

// Shared-mean base for the randomized photocounting effect.
WishartModel randomized_base(const WishartModel& model) {
    if (model.has_means()) {
        for (std::size_t i = 1; i < model.means.size(); ++i)
            if (model.means[i] != model.means[0])
                throw ValidationError(
                    "randomized statistics need one shared mean vector across waves");
    }
    return single_wave(model, 1);
}

}  // namespace

Rational randomized_stat_exact(const WishartModel& model, const CountModel& count,
                               RandomizedKind kind, int k) {
    if (k < 1) throw ValidationError("randomized statistic: order must be positive");
    if (k > kMaxPartitionOrder)
        throw BoundsError("randomized statistic: order exceeds bound");
    WishartModel base = randomized_base(model);

    // Base cumulant sequence: count cumulants for the plain kinds, trace
    // cumulants (= factorial cumulants of the count) for the factorial kinds.
    std::vector<Rational> base_cum(static_cast<std::size_t>(k));
    bool factorial_kind =
        kind == RandomizedKind::factorial_moment || kind == RandomizedKind::factorial_cumulant;
    for (int j = 1; j <= k; ++j)
        base_cum[j - 1] = factorial_kind ? trace_cumulant_exact(base, j)
                                         : overall_cumulant_exact(base, j);

    bool moment_kind =
        kind == RandomizedKind::moment || kind == RandomizedKind::factorial_moment;
    std::vector<Rational> weights = moment_kind ? count.moments(k) : count.cumulants(k);
    return generalized_random_sum_moment(weights, base_cum, k);
}

double randomized_stat(const WishartModel& model, const CountModel& count, RandomizedKind kind,
                       int k) {
    return to_double(randomized_stat_exact(model, count, kind, k));
}

}  // namespace photonstats
