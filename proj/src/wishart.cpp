#include "photonstats/wishart.hpp"

#include <algorithm>
#include <mutex>
#include <string>
#include <utility>

#include "photonstats/combinatorics.hpp"
#include "photonstats/errors.hpp"

namespace photonstats {

namespace {

// Truncated polynomial in d variables: multi-index -> coefficient, |t| <= K.
using RPoly = std::map<MultiIndex, Rational>;
using CPoly = std::map<MultiIndex, CRational>;

CPoly cpoly_mul(const CPoly& A, const CPoly& B, int K) {
    CPoly r;
    for (const auto& [ka, va] : A) {
        int ta = mi_total(ka);
        for (const auto& [kb, vb] : B) {
            if (ta + mi_total(kb) > K) continue;
            r[mi_plus(ka, kb)] += va * vb;
        }
    }
    return r;
}

RPoly rpoly_mul(const RPoly& A, const RPoly& B, int K) {
    RPoly r;
    for (const auto& [ka, va] : A) {
        int ta = mi_total(ka);
        for (const auto& [kb, vb] : B) {
            if (ta + mi_total(kb) > K) continue;
            r[mi_plus(ka, kb)] += va * vb;
        }
    }
    return r;
}

RPoly rpoly_pow(RPoly base, int e, int K, int d) {
    RPoly r{{MultiIndex(d, 0), Rational(1)}};
    while (e > 0) {
        if (e & 1) r = rpoly_mul(r, base, K);
        e >>= 1;
        if (e > 0) base = rpoly_mul(base, base, K);
    }
    return r;
}

Integer mi_factorial(const MultiIndex& k) {
    Integer f = 1;
    for (int v : k) f *= factorial(v);
    return f;
}

}  // namespace

struct WishartCache {
    std::mutex mu;
    std::vector<CMatrix> sigma_pows;       // sigma^1, sigma^2, ...
    std::vector<Rational> tr_sigma_pow;    // Tr sigma^k at index k-1
    std::vector<Rational> tr_m_sigma_pow;  // Tr(M sigma^{k-1}) at index k-1
    std::map<int, RPoly> joint_norm;       // normalized joint moment table per order
    std::map<int, MultiTable<Rational>> joint_cum;
};

WishartModel make_wishart_model(const ZMatrix& sigma, int p,
                                const std::vector<ZVector>& means, double herm_tol) {
    if (sigma.rows() < 1 || sigma.rows() != sigma.cols())
        throw ValidationError("model: sigma must be square with d >= 1");
    if (p < 1) throw ValidationError("model: p must be >= 1");
    const int d = static_cast<int>(sigma.rows());

    double defect = hermitian_defect(sigma);
    if (!(defect <= herm_tol))
        throw ValidationError("model: sigma is not Hermitian (defect " +
                              std::to_string(defect) + ")");

    WishartModel m;
    m.d = d;
    m.p = p;
    m.symmetrized = defect > 0.0;
    // Exact averaging with the conjugate transpose; exact mirror first so the
    // numeric matrix is its rounding, not the other way around.
    CMatrix sx = cmatrix_from(sigma);
    m.sigma_x = scale(Rational(1, 2), matadd(sx, conj_transpose(sx)));
    m.sigma = m.symmetrized ? zmatrix_from(m.sigma_x) : sigma;

    Eigen::LLT<ZMatrix> llt(m.sigma);
    if (llt.info() != Eigen::Success)
        throw ValidationError("model: sigma is not positive-definite");

    bool any_nonzero = false;
    for (const auto& v : means) {
        if (static_cast<int>(v.size()) != d)
            throw ValidationError("model: mean vector dimension mismatch");
        if (v.cwiseAbs().maxCoeff() > 0.0) any_nonzero = true;
    }
    if (!means.empty() && static_cast<int>(means.size()) != p)
        throw ValidationError("model: means must supply one vector per wave");

    m.mean_matrix = ZMatrix::Zero(d, d);
    m.mean_matrix_x = CMatrix(d, d);
    if (any_nonzero) {
        m.means = means;
        m.means_x.resize(means.size());
        for (std::size_t i = 0; i < means.size(); ++i) {
            m.means_x[i].resize(d);
            for (int a = 0; a < d; ++a) m.means_x[i][a] = CRational(means[i][a]);
        }
        for (const auto& mv : m.means_x)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) m.mean_matrix_x(a, b) += mv[a] * conj(mv[b]);
        m.mean_matrix = zmatrix_from(m.mean_matrix_x);
    }

    m.cache = std::make_shared<WishartCache>();
    return m;
}

WishartModel single_wave(const WishartModel& model, int i) {
    if (i < 1 || i > model.p)
        throw ValidationError("single_wave: wave index " + std::to_string(i) +
                              " out of range 1.." + std::to_string(model.p));
    std::vector<ZVector> mean;
    if (model.has_means()) mean.push_back(model.means[i - 1]);
    return make_wishart_model(model.sigma, 1, mean);
}

ZMatrix omega(const WishartModel& model) {
    return model.sigma.llt().solve(model.mean_matrix);
}

namespace {

// Ensures sigma powers and the two trace arrays cover order k; call under lock.
void extend_traces(const WishartModel& m, WishartCache& c, int k) {
    while (static_cast<int>(c.tr_sigma_pow.size()) < k) {
        if (c.sigma_pows.empty())
            c.sigma_pows.push_back(m.sigma_x);
        else
            c.sigma_pows.push_back(matmul(c.sigma_pows.back(), m.sigma_x));
        const CMatrix& pw = c.sigma_pows.back();
        CRational ts = trace(pw);
        if (!ts.is_real()) throw NumericError("trace of Hermitian power not real");
        c.tr_sigma_pow.push_back(ts.re);

        int order = static_cast<int>(c.tr_sigma_pow.size());
        if (m.has_means()) {
            CRational tm = order == 1
                               ? trace(m.mean_matrix_x)
                               : trace(matmul(m.mean_matrix_x, c.sigma_pows[order - 2]));
            if (!tm.is_real()) throw NumericError("noncentral trace term not real");
            c.tr_m_sigma_pow.push_back(tm.re);
        } else {
            c.tr_m_sigma_pow.push_back(Rational(0));
        }
    }
}

Rational tr_sigma_pow(const WishartModel& m, int k) {
    std::lock_guard<std::mutex> lock(m.cache->mu);
    extend_traces(m, *m.cache, k);
    return m.cache->tr_sigma_pow[k - 1];
}

Rational tr_m_sigma_pow(const WishartModel& m, int k) {
    std::lock_guard<std::mutex> lock(m.cache->mu);
    extend_traces(m, *m.cache, k);
    return m.cache->tr_m_sigma_pow[k - 1];
}

}  // namespace

Rational trace_cumulant_exact(const WishartModel& model, int k) {
    if (k < 1) throw ValidationError("trace_cumulant: order must be positive");
    Rational v = Rational(model.p) * Rational(factorial(k - 1)) * tr_sigma_pow(model, k);
    if (model.has_means()) v += Rational(factorial(k)) * tr_m_sigma_pow(model, k);
    return v;
}

double trace_cumulant(const WishartModel& model, int k) {
    return to_double(trace_cumulant_exact(model, k));
}

std::vector<Rational> trace_cumulants_exact(const WishartModel& model, int K) {
    std::vector<Rational> c;
    c.reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) c.push_back(trace_cumulant_exact(model, k));
    return c;
}

Rational trace_moment_exact(const WishartModel& model, int k) {
    if (k < 0) throw ValidationError("trace_moment: negative order");
    if (k == 0) return Rational(1);
    if (k > kMaxPartitionOrder)
        throw BoundsError("trace_moment: order " + std::to_string(k) + " exceeds bound " +
                          std::to_string(kMaxPartitionOrder));
    return complete_bell(trace_cumulants_exact(model, k));
}

double trace_moment(const WishartModel& model, int k) {
    return to_double(trace_moment_exact(model, k));
}

std::vector<Rational> trace_moments_exact(const WishartModel& model, int K) {
    return moments_from_cumulants(trace_cumulants_exact(model, K));
}

CyclicMomentReport trace_moment_cyclic(const WishartModel& model, int k) {
    if (k < 0) throw ValidationError("trace_moment_cyclic: negative order");
    if (k > kMaxPartitionOrder)
        throw BoundsError("trace_moment_cyclic: order exceeds partition bound");
    CyclicMomentReport rep;
    rep.bell_value = k == 0 ? Rational(1) : complete_bell(trace_cumulants_exact(model, k));

    // Power sums s_i = Tr(sigma^i) feeding the cyclic polynomials.
    std::vector<Rational> cyc(static_cast<std::size_t>(k));  // C_1..C_k of sigma
    {
        std::vector<Rational> s;
        for (int i = 1; i <= k; ++i) {
            s.push_back(tr_sigma_pow(model, i));
            cyc[i - 1] = cyclic_polynomial(s);
        }
    }
    auto noncentral_factor = [&](int j) {  // sum over partitions of j
        if (j == 0) return Rational(1);
        Rational s(0);
        for (const auto& lam : enumerate_partitions(j)) {
            auto st = partition_stats(lam);
            Rational prod = (st.l % 2 == 0) ? Rational(1) : Rational(-1);
            for (int part : lam.parts) prod *= tr_m_sigma_pow(model, part);
            s += prod / Rational(st.m_factorial);
        }
        return s;
    };
    auto central_factor = [&](int i) {
        if (i == 0) return Rational(1);
        Rational s(0);
        for (const auto& lam : enumerate_partitions(i)) {
            auto st = partition_stats(lam);
            Rational prod = rational_pow(Rational(model.p), st.l);
            for (int part : lam.parts) prod *= cyc[part - 1];
            s += prod / Rational(st.m_factorial);
        }
        return s;
    };
    Rational total(0);
    for (int j = 0; j <= k; ++j) total += noncentral_factor(j) * central_factor(k - j);
    rep.cyclic_value = Rational(factorial(k)) * total;
    rep.deviation = rep.cyclic_value - rep.bell_value;
    return rep;
}

namespace {

// Single-wave joint intensity moments E[prod_a I_a^{t_a}] for one circular
// complex Gaussian wave x with covariance sigma and mean mv, normalized by t!.
// Expansion of prod |x_a + m_a|^{2 t_a} over {x,m} x {conj x, conj m} leaves
//   sum_{u,v <= t, |u|=|v|} prod_a C(t_a,u_a) C(t_a,v_a)
//       m^{t-u} conj(m)^{t-v} perm(sigma[u-rows, v-cols]),
// the permanent taken over index multisets u (unbarred) and v (barred).
RPoly single_wave_table(const CMatrix& sigma, const std::vector<CRational>& mv, int K) {
    const int d = sigma.rows;
    const bool zero_mean = mv.empty();

    // Permanents for all needed (u, v) via generating polynomials:
    // perm(u, v) = v! * [y^v] prod_a (sum_b sigma_ab y_b)^{u_a}.
    // The row polynomials are homogeneous of degree 1, so the generating
    // polynomial for u extends the one for u - e_a by a single row factor;
    // graded iteration makes every predecessor available.
    std::vector<CPoly> row_poly(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            if (sigma(a, b).is_zero()) continue;
            MultiIndex e(d, 0);
            e[b] = 1;
            row_poly[a][e] = sigma(a, b);
        }
    std::map<MultiIndex, CPoly> perm_gf;
    mi_for_each_degree(d, K, [&](const MultiIndex& u) {
        if (mi_is_zero(u)) {
            perm_gf[u] = CPoly{{MultiIndex(d, 0), CRational(Rational(1))}};
            return;
        }
        int a = 0;
        while (u[a] == 0) ++a;
        MultiIndex prev = u;
        --prev[a];
        perm_gf[u] = cpoly_mul(perm_gf.at(prev), row_poly[a], mi_total(u));
    });
    auto permanent = [&](const MultiIndex& u, const MultiIndex& v) -> CRational {
        const CPoly& p = perm_gf.at(u);
        auto it = p.find(v);
        if (it == p.end()) return CRational();
        return Rational(mi_factorial(v)) * it->second;
    };

    RPoly table;
    mi_for_each_degree(d, K, [&](const MultiIndex& t) {
        CRational w;
        if (zero_mean) {
            w = permanent(t, t);
        } else {
            mi_for_each_in_box(t, [&](const MultiIndex& u) {
                int uu = mi_total(u);
                mi_for_each_in_box(t, [&](const MultiIndex& v) {
                    if (mi_total(v) != uu) return;
                    CRational term = permanent(u, v);
                    if (term.is_zero()) return;
                    Rational binom(1);
                    for (int a = 0; a < d; ++a)
                        binom *= Rational(binomial(t[a], u[a]) * binomial(t[a], v[a]));
                    CRational mono(Rational(1));
                    for (int a = 0; a < d; ++a) {
                        if (t[a] - u[a] > 0) mono *= crational_pow(mv[a], t[a] - u[a]);
                        if (t[a] - v[a] > 0) mono *= crational_pow(conj(mv[a]), t[a] - v[a]);
                    }
                    w += binom * (term * mono);
                });
            });
        }
        if (!w.is_real()) throw NumericError("joint intensity moment not real");
        table[t] = w.re / Rational(mi_factorial(t));
    });
    return table;
}

// Normalized joint table for the full p-wave model: the product over waves of
// their normalized single-wave tables (grouped by identical means).
const RPoly& joint_table_normalized(const WishartModel& m, int K) {
    std::lock_guard<std::mutex> lock(m.cache->mu);
    // Any cached table of order >= K contains every term of order <= K.
    auto it = m.cache->joint_norm.lower_bound(K);
    if (it != m.cache->joint_norm.end()) return it->second;

    std::map<std::vector<std::pair<Rational, Rational>>, int> groups;
    if (m.has_means()) {
        for (const auto& mv : m.means_x) {
            std::vector<std::pair<Rational, Rational>> key;
            key.reserve(mv.size());
            for (const auto& z : mv) key.emplace_back(z.re, z.im);
            ++groups[key];
        }
    } else {
        groups[{}] = m.p;
    }

    RPoly prod{{MultiIndex(static_cast<std::size_t>(m.d), 0), Rational(1)}};
    for (const auto& [key, count] : groups) {
        std::vector<CRational> mv;
        bool zero = true;
        for (const auto& [re, im] : key) {
            mv.emplace_back(re, im);
            if (re != 0 || im != 0) zero = false;
        }
        if (zero) mv.clear();
        RPoly h = single_wave_table(m.sigma_x, mv, K);
        prod = rpoly_mul(prod, rpoly_pow(std::move(h), count, K, m.d), K);
    }
    return m.cache->joint_norm.emplace(K, std::move(prod)).first->second;
}

void check_joint_index(const WishartModel& model, const MultiIndex& k, int bound) {
    if (static_cast<int>(k.size()) != model.d)
        throw ValidationError("joint moment: index dimension mismatch");
    for (int v : k)
        if (v < 0) throw ValidationError("joint moment: negative index component");
    if (mi_total(k) > bound)
        throw BoundsError("joint moment: |k| = " + std::to_string(mi_total(k)) +
                          " exceeds bound " + std::to_string(bound));
}

}  // namespace

Rational joint_intensity_moment_exact(const WishartModel& model, const MultiIndex& k,
                                      int bound) {
    check_joint_index(model, k, bound);
    if (mi_is_zero(k)) return Rational(1);
    const RPoly& table = joint_table_normalized(model, mi_total(k));
    auto it = table.find(k);
    Rational v = it == table.end() ? Rational(0) : it->second;
    return Rational(mi_factorial(k)) * v;
}

double joint_intensity_moment(const WishartModel& model, const MultiIndex& k, int bound) {
    return to_double(joint_intensity_moment_exact(model, k, bound));
}

MultiTable<Rational> joint_intensity_moment_table(const WishartModel& model, int K,
                                                  int bound) {
    if (K < 1) throw ValidationError("joint moment table: order must be positive");
    if (K > bound) throw BoundsError("joint moment table: order exceeds bound");
    const RPoly& norm = joint_table_normalized(model, K);
    auto t = make_multi_table<Rational>(model.d, K);
    mi_for_each_degree(model.d, K, [&](const MultiIndex& k) {
        if (mi_is_zero(k)) return;
        auto it = norm.find(k);
        Rational v = it == norm.end() ? Rational(0) : it->second;
        t.values[k] = Rational(mi_factorial(k)) * v;
    });
    return t;
}

MultiTable<Rational> joint_intensity_cumulant_table(const WishartModel& model, int K,
                                                    int bound) {
    if (K < 1) throw ValidationError("joint cumulant table: order must be positive");
    if (K > bound) throw BoundsError("joint cumulant table: order exceeds bound");
    {
        std::lock_guard<std::mutex> lock(model.cache->mu);
        auto it = model.cache->joint_cum.find(K);
        if (it != model.cache->joint_cum.end()) return it->second;
    }
    auto cum = mv_cumulants_from_moments(joint_intensity_moment_table(model, K, bound));
    std::lock_guard<std::mutex> lock(model.cache->mu);
    return model.cache->joint_cum.emplace(K, std::move(cum)).first->second;
}

Rational joint_intensity_cumulant_exact(const WishartModel& model, const MultiIndex& k,
                                        int bound) {
    check_joint_index(model, k, bound);
    if (mi_is_zero(k)) throw ValidationError("joint cumulant: all-zero index");
    return joint_intensity_cumulant_table(model, mi_total(k), bound).at(k);
}

double joint_intensity_cumulant(const WishartModel& model, const MultiIndex& k, int bound) {
    return to_double(joint_intensity_cumulant_exact(model, k, bound));
}

}  // namespace photonstats
