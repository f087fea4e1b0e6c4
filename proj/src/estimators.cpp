#include "photonstats/estimators.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <string>

namespace photonstats {

namespace {

Integer falling(int n, int j) {
    Integer f = 1;
    for (int t = 0; t < j; ++t) f *= n - t;
    return f;
}

Integer integer_pow(Integer base, int e) {
    Integer r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// First nonzero-pivot Gaussian elimination; empty result signals singularity.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> a,
                                   std::vector<Rational> b) {
    const std::size_t m = a.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        while (piv < m && a[piv][col] == 0) ++piv;
        if (piv == m) return {};
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Rational> x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = b[i] / a[i][i];
    return x;
}

// Block assignments of {0..l-1} as restricted growth strings.
void for_each_set_partition(int l, const std::function<void(const std::vector<int>&, int)>& fn) {
    std::vector<int> assign(static_cast<std::size_t>(l), 0);
    auto rec = [&](auto&& self, int i, int used) -> void {
        if (i == l) {
            fn(assign, used);
            return;
        }
        for (int b = 0; b <= used; ++b) {
            assign[i] = b;
            self(self, i + 1, std::max(used, b + 1));
        }
    };
    rec(rec, 0, 0);
}

using CumulantPoly = std::map<IntegerPartition, Rational>;

IntegerPartition key_concat(const IntegerPartition& a, const IntegerPartition& b) {
    IntegerPartition r = a;
    r.parts.insert(r.parts.end(), b.parts.begin(), b.parts.end());
    std::sort(r.parts.begin(), r.parts.end(), std::greater<int>());
    return r;
}

// E[prod_i s_{mu_i}] over n i.i.d. draws, expanded in population cumulant
// monomials: set partitions group the power-sum factors that share one draw.
CumulantPoly power_monomial_expectation(const IntegerPartition& mu, int n) {
    const int l = mu.length();
    CumulantPoly acc;
    for_each_set_partition(l, [&](const std::vector<int>& assign, int nblocks) {
        std::vector<int> block_sum(static_cast<std::size_t>(nblocks), 0);
        for (int i = 0; i < l; ++i) block_sum[assign[i]] += mu.parts[i];
        Rational weight(falling(n, nblocks));
        CumulantPoly poly;
        poly[IntegerPartition{}] = weight;
        for (int bs : block_sum) {
            CumulantPoly next;
            for (const auto& nu : enumerate_partitions(bs)) {
                Rational d(partition_stats(nu).d_coeff);
                for (const auto& [key, coeff] : poly) next[key_concat(key, nu)] += coeff * d;
            }
            poly = std::move(next);
        }
        for (const auto& [key, coeff] : poly) acc[key] += coeff;
    });
    return acc;
}

void check_partition_arg(const IntegerPartition& lambda, const char* what) {
    if (lambda.parts.empty())
        throw ValidationError(std::string(what) + ": empty partition");
    partition_stats(lambda);  // validates shape
}

}  // namespace

struct Sample::Cache {
    std::mutex mu;
    std::vector<Rational> sums;      // sums[j] = s_j
    std::vector<Rational> cur_pows;  // x_i^{sums.size()-1}
};

Sample::Sample(std::vector<Rational> values)
    : values_(std::move(values)), cache_(std::make_shared<Cache>()) {
    if (values_.empty()) throw ValidationError("sample: needs at least one value");
    cache_->sums.push_back(Rational(n()));
    cache_->cur_pows.assign(values_.size(), Rational(1));
}

Sample Sample::from_doubles(const std::vector<double>& values) {
    std::vector<Rational> v;
    v.reserve(values.size());
    for (double x : values) v.push_back(rational_from_double(x));
    return Sample(std::move(v));
}

Rational Sample::power_sum(int j) const {
    if (j < 0) throw ValidationError("sample: power sum order must be nonnegative");
    std::lock_guard<std::mutex> lock(cache_->mu);
    while (static_cast<int>(cache_->sums.size()) <= j) {
        Rational s = 0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            cache_->cur_pows[i] *= values_[i];
            s += cache_->cur_pows[i];
        }
        cache_->sums.push_back(s);
    }
    return cache_->sums[static_cast<std::size_t>(j)];
}

std::vector<std::pair<IntegerPartition, Rational>> polykay_coefficients(
    const IntegerPartition& lambda, int n) {
    check_partition_arg(lambda, "polykay");
    const int k = lambda.k();
    if (k > kMaxEstimatorOrder)
        throw BoundsError("polykay: degree " + std::to_string(k) + " exceeds bound " +
                          std::to_string(kMaxEstimatorOrder));
    if (n <= k)
        throw DofError("polykay: sample size " + std::to_string(n) +
                       " must exceed the degree " + std::to_string(k));

    auto basis = enumerate_partitions(k);
    const std::size_t m = basis.size();
    std::map<IntegerPartition, std::size_t> row;
    for (std::size_t i = 0; i < m; ++i) row[basis[i]] = i;

    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m));
    for (std::size_t c = 0; c < m; ++c)
        for (const auto& [key, coeff] : power_monomial_expectation(basis[c], n))
            a[row.at(key)][c] = coeff;
    std::vector<Rational> rhs(m);
    rhs[row.at(lambda)] = 1;

    auto x = solve_linear(std::move(a), std::move(rhs));
    if (x.empty()) throw DofError("polykay: unbiasedness system is singular at this n");
    std::vector<std::pair<IntegerPartition, Rational>> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.emplace_back(basis[i], x[i]);
    return out;
}

Rational polykay_exact(const Sample& sample, const IntegerPartition& lambda) {
    Rational value = 0;
    for (const auto& [mu, coeff] : polykay_coefficients(lambda, sample.n())) {
        if (coeff == 0) continue;
        Rational mono = coeff;
        for (int part : mu.parts) mono *= sample.power_sum(part);
        value += mono;
    }
    return value;
}

double polykay(const Sample& sample, const IntegerPartition& lambda) {
    return to_double(polykay_exact(sample, lambda));
}

Rational factorial_moment_ustat_exact(const Sample& sample, int k) {
    if (k < 0) throw ValidationError("factorial moment estimator: order must be nonnegative");
    if (k > kMaxPartitionOrder)
        throw BoundsError("factorial moment estimator: order exceeds bound");
    Rational total = 0;
    for (const auto& lam : enumerate_partitions(k)) {
        Rational term(partition_stats(lam).d_coeff);
        term *= sample.power_sum(lam.length());
        for (const auto& [j, r] : lam.multiplicities()) {
            term *= Rational(integer_pow(factorial(j - 1), r));
            if ((j - 1) * r % 2 != 0) term = -term;
        }
        total += term;
    }
    return total / Rational(sample.n());
}

double factorial_moment_ustat(const Sample& sample, int k) {
    return to_double(factorial_moment_ustat_exact(sample, k));
}

struct SpectralSample::Cache {
    std::mutex mu;
    bool has_matrix = false;
    ZMatrix w;
    ZMatrix power;                 // w^{traces.size()}
    std::vector<Rational> traces;  // traces[j-1] = T_j
};

SpectralSample SpectralSample::from_matrix(const ZMatrix& w, double herm_tol) {
    if (w.rows() != w.cols())
        throw ValidationError("spectral sample: matrix must be square");
    if (w.rows() < 1) throw ValidationError("spectral sample: dimension must be >= 1");
    if (hermitian_defect(w) > herm_tol)
        throw ValidationError("spectral sample: matrix is not Hermitian within tolerance");
    SpectralSample s;
    s.d_ = static_cast<int>(w.rows());
    s.cache_ = std::make_shared<Cache>();
    s.cache_->has_matrix = true;
    s.cache_->w = (w + w.adjoint()) / 2.0;
    s.cache_->power = ZMatrix::Identity(s.d_, s.d_);
    return s;
}

SpectralSample SpectralSample::from_traces(int d, std::vector<Rational> traces) {
    if (d < 1) throw ValidationError("spectral sample: dimension must be >= 1");
    SpectralSample s;
    s.d_ = d;
    s.cache_ = std::make_shared<Cache>();
    s.cache_->traces = std::move(traces);
    return s;
}

SpectralSample SpectralSample::from_trace_doubles(int d, const std::vector<double>& traces) {
    std::vector<Rational> t;
    t.reserve(traces.size());
    for (double v : traces) t.push_back(rational_from_double(v));
    return from_traces(d, std::move(t));
}

Rational SpectralSample::trace_power(int j) const {
    if (j < 0) throw ValidationError("spectral sample: trace power order must be nonnegative");
    if (j == 0) return Rational(d_);
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (j > static_cast<int>(cache_->traces.size()) && !cache_->has_matrix)
        throw CoverageError("spectral sample: supplied trace powers cover order " +
                            std::to_string(cache_->traces.size()) + ", requested " +
                            std::to_string(j));
    while (static_cast<int>(cache_->traces.size()) < j) {
        cache_->power *= cache_->w;
        cache_->traces.push_back(rational_from_double(cache_->power.trace().real()));
    }
    return cache_->traces[static_cast<std::size_t>(j) - 1];
}

namespace {

// S_k with cycle classes, built once per order.
struct SymTable {
    std::vector<std::vector<int>> perms;
    std::vector<int> class_of;              // per perm, index into classes
    std::vector<IntegerPartition> classes;  // enumerate_partitions(k) order
    std::vector<std::size_t> rep;           // one representative perm per class
    std::map<IntegerPartition, int> class_index;
};

IntegerPartition cycle_type(const std::vector<int>& perm) {
    IntegerPartition t;
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
            seen[j] = true;
            ++len;
        }
        t.parts.push_back(len);
    }
    std::sort(t.parts.begin(), t.parts.end(), std::greater<int>());
    return t;
}

const SymTable& sym_table(int k) {
    static std::mutex mu;
    static std::map<int, SymTable> tables;
    std::lock_guard<std::mutex> lock(mu);
    auto it = tables.find(k);
    if (it != tables.end()) return it->second;

    SymTable t;
    t.classes = enumerate_partitions(k);
    for (std::size_t i = 0; i < t.classes.size(); ++i)
        t.class_index[t.classes[i]] = static_cast<int>(i);
    t.rep.assign(t.classes.size(), 0);
    std::vector<bool> have(t.classes.size(), false);
    std::vector<int> p(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i)] = i;
    do {
        int ci = t.class_index.at(cycle_type(p));
        if (!have[static_cast<std::size_t>(ci)]) {
            have[static_cast<std::size_t>(ci)] = true;
            t.rep[static_cast<std::size_t>(ci)] = t.perms.size();
        }
        t.class_of.push_back(ci);
        t.perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return tables.emplace(k, std::move(t)).first->second;
}

std::vector<int> invert_perm(const std::vector<int>& p) {
    std::vector<int> inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) inv[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
    return inv;
}

std::vector<int> compose(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[static_cast<std::size_t>(b[i])];
    return r;
}

}  // namespace

SpectralWeights spectral_weights(const IntegerPartition& lambda, int d) {
    check_partition_arg(lambda, "spectral weights");
    const int k = lambda.k();
    if (k > kMaxSpectralOrder)
        throw BoundsError("spectral weights: order " + std::to_string(k) + " exceeds bound " +
                          std::to_string(kMaxSpectralOrder));
    if (d < 1) throw ValidationError("spectral weights: dimension must be >= 1");

    const SymTable& t = sym_table(k);
    const std::size_t m = t.classes.size();
    auto target = t.class_index.find(lambda);
    if (target == t.class_index.end())
        throw ValidationError("spectral weights: malformed partition");

    // Class function Tr(I_d): d^{number of cycles}.
    std::vector<Rational> f(m);
    for (std::size_t i = 0; i < m; ++i) f[i] = Rational(integer_pow(d, t.classes[i].length()));

    // Convolution inverse g: sum over factorizations tau.omega = sigma of
    // f(tau) g(omega) equals 1 at the identity and 0 on every other class.
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m));
    std::vector<std::vector<int>> inv_perms;
    inv_perms.reserve(t.perms.size());
    for (const auto& p : t.perms) inv_perms.push_back(invert_perm(p));
    for (std::size_t ti = 0; ti < t.perms.size(); ++ti) {
        const Rational& ft = f[static_cast<std::size_t>(t.class_of[ti])];
        for (std::size_t nu = 0; nu < m; ++nu) {
            int rho = t.class_index.at(cycle_type(compose(inv_perms[ti], t.perms[t.rep[nu]])));
            a[nu][static_cast<std::size_t>(rho)] += ft;
        }
    }
    int id_class = t.class_index.at(cycle_type(t.perms[0]));  // perms[0] = identity
    std::vector<Rational> rhs(m);
    rhs[static_cast<std::size_t>(id_class)] = 1;
    auto g = solve_linear(a, rhs);
    if (g.empty())
        throw DegenerateDimensionError("spectral weights: dimension " + std::to_string(d) +
                                       " is degenerate for order " + std::to_string(k));

    // Convolve with the indicator of the target class at its representative.
    const auto& sigma = t.perms[t.rep[static_cast<std::size_t>(target->second)]];
    std::vector<Rational> w(m);
    for (std::size_t ti = 0; ti < t.perms.size(); ++ti) {
        int rho = t.class_index.at(cycle_type(compose(inv_perms[ti], sigma)));
        w[static_cast<std::size_t>(rho)] += g[static_cast<std::size_t>(t.class_of[ti])];
    }

    SpectralWeights out;
    out.prefactor = 1;
    for (const auto& [j, r] : lambda.multiplicities())
        out.prefactor *= Rational(integer_pow(factorial(j - 1), r));
    out.weights.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.weights.emplace_back(t.classes[i], w[i]);
    return out;
}

Rational spectral_polykay_exact(const SpectralSample& sample, const IntegerPartition& lambda) {
    auto sw = spectral_weights(lambda, sample.dimension());
    Rational value = 0;
    for (const auto& [mu, coeff] : sw.weights) {
        if (coeff == 0) continue;
        Rational mono = coeff;
        for (int part : mu.parts) mono *= sample.trace_power(part);
        value += mono;
    }
    return sw.prefactor * value;
}

double spectral_polykay(const SpectralSample& sample, const IntegerPartition& lambda) {
    return to_double(spectral_polykay_exact(sample, lambda));
}

}  // namespace photonstats
