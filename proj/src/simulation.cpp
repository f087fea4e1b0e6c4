#include "photonstats/simulation.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include "photonstats/errors.hpp"
#include "photonstats/estimators.hpp"
#include "photonstats/model_io.hpp"

namespace photonstats {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Per-draw generator: a pure function of (seed, stream, draw index).
struct DrawRng {
    std::uint64_t state;
    bool has_spare = false;
    double spare = 0.0;

    DrawRng(const RngStream& s, std::uint64_t draw) {
        state = mix64(s.seed + kGolden);
        state = mix64(state ^ (s.stream_index + 0xD1B54A32D192ED03ULL));
        state = mix64(state ^ (draw + 0x8BB84B93962EACC9ULL));
    }

    std::uint64_t next_u64() {
        state += kGolden;
        return mix64(state);
    }

    double uniform() {  // strictly inside (0, 1)
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        double r = std::sqrt(-2.0 * std::log(uniform()));
        double a = 2.0 * std::numbers::pi * uniform();
        spare = r * std::sin(a);
        has_spare = true;
        return r * std::cos(a);
    }

    std::complex<double> circular() {  // E|z|^2 = 1
        double g1 = normal(), g2 = normal();
        return {g1 * std::numbers::sqrt2 / 2.0, g2 * std::numbers::sqrt2 / 2.0};
    }

    long long poisson(double lambda) {
        if (!(lambda >= 0)) throw ValidationError("poisson sampling: negative rate");
        if (lambda == 0) return 0;
        if (lambda > 60) {  // split additively to keep the product method exact
            double half = lambda / 2;
            return poisson(half) + poisson(lambda - half);
        }
        double limit = std::exp(-lambda), prod = 1.0;
        long long k = -1;
        do {
            ++k;
            prod *= uniform();
        } while (prod > limit);
        return k;
    }

    long long count_draw(const CountModel& c) {
        switch (c.kind) {
            case CountModel::Kind::deterministic:
                return c.p;
            case CountModel::Kind::poisson:
                return poisson(to_double(c.mu));
            case CountModel::Kind::custom:
            default:
                throw ValidationError("sampling: custom-moment count models cannot be drawn from");
        }
    }
};

ZMatrix chol_lower(const WishartModel& m) {
    Eigen::LLT<ZMatrix> llt(m.sigma);
    if (llt.info() != Eigen::Success)
        throw NumericError("sampling: covariance factorization failed (not positive definite)");
    return ZMatrix(llt.matrixL());
}

void draw_intensity_row(DrawRng& rng, const WishartModel& m, const ZMatrix& chol, int waves,
                        bool shared_mean, std::vector<double>& out) {
    const int d = m.d;
    out.assign(static_cast<std::size_t>(d), 0.0);
    ZVector g(d);
    for (int w = 0; w < waves; ++w) {
        for (int j = 0; j < d; ++j) g[j] = rng.circular();
        ZVector z = chol * g;
        if (!m.means.empty()) z += shared_mean ? m.means[0] : m.means[static_cast<std::size_t>(w)];
        for (int j = 0; j < d; ++j) out[static_cast<std::size_t>(j)] += std::norm(z[j]);
    }
}

void run_chunked(int n, int workers, const std::function<void(int, int)>& body) {
    if (workers < 1) throw ValidationError("sampling: workers must be >= 1");
    workers = std::min(workers, std::max(1, n));
    if (workers == 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& t : pool) t.join();
}

SampleBatch make_batch(const WishartModel& m, int n, const RngStream& rng) {
    if (n < 1) throw ValidationError("sampling: batch size must be >= 1");
    SampleBatch b;
    b.n = n;
    b.d = m.d;
    b.seed = rng.seed;
    b.stream_index = rng.stream_index;
    b.model_digest = model_digest(m);
    return b;
}

void check_shared_means(const WishartModel& m) {
    for (std::size_t i = 1; i < m.means.size(); ++i)
        if (m.means[i] != m.means[0])
            throw ValidationError("sampling: randomized counts need one shared mean vector");
}

}  // namespace

SampleBatch sample_intensities(const WishartModel& model, int n, const RngStream& rng,
                               int workers) {
    SampleBatch b = make_batch(model, n, rng);
    ZMatrix chol = chol_lower(model);
    b.intensities.assign(static_cast<std::size_t>(n), {});
    run_chunked(n, workers, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            DrawRng r(rng, static_cast<std::uint64_t>(i));
            draw_intensity_row(r, model, chol, model.p, false,
                               b.intensities[static_cast<std::size_t>(i)]);
        }
    });
    return b;
}

SampleBatch sample_counts(const WishartModel& model, int n, const RngStream& rng, int workers) {
    SampleBatch b = make_batch(model, n, rng);
    ZMatrix chol = chol_lower(model);
    b.intensities.assign(static_cast<std::size_t>(n), {});
    b.counts.assign(static_cast<std::size_t>(n), {});
    run_chunked(n, workers, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            DrawRng r(rng, static_cast<std::uint64_t>(i));
            auto& lam = b.intensities[static_cast<std::size_t>(i)];
            draw_intensity_row(r, model, chol, model.p, false, lam);
            auto& row = b.counts[static_cast<std::size_t>(i)];
            row.resize(lam.size());
            for (std::size_t j = 0; j < lam.size(); ++j) row[j] = r.poisson(lam[j]);
        }
    });
    return b;
}

SampleBatch sample_counts_randomized(const WishartModel& model, const CountModel& count, int n,
                                     const RngStream& rng, int workers) {
    check_shared_means(model);
    if (count.kind == CountModel::Kind::custom)
        throw ValidationError("sampling: custom-moment count models cannot be drawn from");
    SampleBatch b = make_batch(model, n, rng);
    ZMatrix chol = chol_lower(model);
    b.intensities.assign(static_cast<std::size_t>(n), {});
    b.counts.assign(static_cast<std::size_t>(n), {});
    run_chunked(n, workers, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            DrawRng r(rng, static_cast<std::uint64_t>(i));
            long long waves = r.count_draw(count);
            auto& lam = b.intensities[static_cast<std::size_t>(i)];
            draw_intensity_row(r, model, chol, static_cast<int>(waves), true, lam);
            auto& row = b.counts[static_cast<std::size_t>(i)];
            row.resize(lam.size());
            for (std::size_t j = 0; j < lam.size(); ++j) row[j] = r.poisson(lam[j]);
        }
    });
    return b;
}

ZMatrix sample_wishart(const WishartModel& model, const RngStream& rng,
                       std::uint64_t draw_index) {
    ZMatrix chol = chol_lower(model);
    DrawRng r(rng, draw_index);
    ZMatrix w = ZMatrix::Zero(model.d, model.d);
    ZVector g(model.d);
    for (int wi = 0; wi < model.p; ++wi) {
        for (int j = 0; j < model.d; ++j) g[j] = r.circular();
        ZVector z = chol * g;
        if (!model.means.empty()) z += model.means[static_cast<std::size_t>(wi)];
        w += z * z.adjoint();
    }
    return w;
}

std::vector<long long> sample_poisson_vector(const std::vector<double>& intensities,
                                             const RngStream& rng, std::uint64_t draw_index) {
    DrawRng r(rng, draw_index);
    std::vector<long long> out(intensities.size());
    for (std::size_t j = 0; j < intensities.size(); ++j) out[j] = r.poisson(intensities[j]);
    return out;
}

EmpiricalCumulants empirical_cumulants(const std::vector<double>& xs, int K) {
    const int n = static_cast<int>(xs.size());
    if (K < 1) throw ValidationError("empirical cumulants: order must be positive");
    if (n <= K)
        throw DofError("empirical cumulants: sample size " + std::to_string(n) +
                       " must exceed the order " + std::to_string(K));

    std::vector<double> s(static_cast<std::size_t>(K) + 1, 0.0);
    s[0] = static_cast<double>(n);
    for (double x : xs) {
        double p = 1.0;
        for (int j = 1; j <= K; ++j) {
            p *= x;
            s[static_cast<std::size_t>(j)] += p;
        }
    }

    EmpiricalCumulants out;
    for (int k = 1; k <= K; ++k) {
        IntegerPartition single{{k}};
        std::vector<std::pair<IntegerPartition, double>> full, loo;
        for (const auto& [mu, c] : polykay_coefficients(single, n))
            full.emplace_back(mu, to_double(c));
        bool have_loo = n - 1 > k;
        if (have_loo)
            for (const auto& [mu, c] : polykay_coefficients(single, n - 1))
                loo.emplace_back(mu, to_double(c));

        auto eval = [&](const std::vector<std::pair<IntegerPartition, double>>& coeffs,
                        const std::vector<double>& sums) {
            double v = 0;
            for (const auto& [mu, c] : coeffs) {
                double mono = c;
                for (int part : mu.parts) mono *= sums[static_cast<std::size_t>(part)];
                v += mono;
            }
            return v;
        };
        out.values.push_back(eval(full, s));

        if (!have_loo) {
            out.std_errors.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        long double sum = 0, sumsq = 0;
        std::vector<double> drop(static_cast<std::size_t>(K) + 1);
        for (double x : xs) {
            drop[0] = static_cast<double>(n - 1);
            double p = 1.0;
            for (int j = 1; j <= K; ++j) {
                p *= x;
                drop[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j)] - p;
            }
            double theta = eval(loo, drop);
            sum += theta;
            sumsq += static_cast<long double>(theta) * theta;
        }
        long double mean = sum / n;
        long double var = sumsq / n - mean * mean;
        if (var < 0) var = 0;
        out.std_errors.push_back(static_cast<double>(std::sqrt(var * (n - 1))));
    }
    return out;
}

EmpiricalCumulants empirical_cumulants(const SampleBatch& batch, int K, int pixel) {
    if (pixel < 1 || pixel > batch.d)
        throw ValidationError("empirical cumulants: pixel out of range");
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(batch.n));
    if (!batch.counts.empty()) {
        for (const auto& row : batch.counts)
            xs.push_back(static_cast<double>(row[static_cast<std::size_t>(pixel - 1)]));
    } else if (!batch.intensities.empty()) {
        for (const auto& row : batch.intensities)
            xs.push_back(row[static_cast<std::size_t>(pixel - 1)]);
    } else {
        throw ValidationError("empirical cumulants: batch holds no rows");
    }
    return empirical_cumulants(xs, K);
}

namespace {

// Odometer over all |values|^n ordered tuples; fn receives exact power sums
// s[0..max_order] of the tuple and the tuple's probability weight.
void enumerate_tuples(const std::vector<Rational>& values, const std::vector<Rational>& probs,
                      int n, int max_order,
                      const std::function<void(const std::vector<Rational>&, const Rational&)>& fn) {
    if (values.empty()) throw ValidationError("enumeration: empty population");
    if (n < 1) throw ValidationError("enumeration: sample size must be >= 1");
    std::vector<Rational> weights = probs;
    if (weights.empty())
        weights.assign(values.size(), Rational(1) / Rational(Integer(values.size())));
    if (weights.size() != values.size())
        throw ValidationError("enumeration: probability list length mismatch");
    Rational total = 0;
    for (const auto& w : weights) {
        if (w < 0) throw ValidationError("enumeration: negative probability");
        total += w;
    }
    if (total != 1) throw ValidationError("enumeration: probabilities must sum to one");

    const std::size_t m = values.size();
    double budget = std::pow(static_cast<double>(m), n);
    if (budget > 1e7) throw BoundsError("enumeration: population^n exceeds the 10^7 budget");

    // powers[v][j] = values[v]^j
    std::vector<std::vector<Rational>> powers(m, std::vector<Rational>(
                                                     static_cast<std::size_t>(max_order) + 1));
    for (std::size_t v = 0; v < m; ++v) {
        powers[v][0] = 1;
        for (int j = 1; j <= max_order; ++j) powers[v][static_cast<std::size_t>(j)] =
            powers[v][static_cast<std::size_t>(j) - 1] * values[v];
    }

    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<Rational> s(static_cast<std::size_t>(max_order) + 1);
    for (;;) {
        for (int j = 0; j <= max_order; ++j) {
            s[static_cast<std::size_t>(j)] = 0;
            for (int i = 0; i < n; ++i)
                s[static_cast<std::size_t>(j)] += powers[idx[static_cast<std::size_t>(i)]]
                                                        [static_cast<std::size_t>(j)];
        }
        Rational w = 1;
        for (int i = 0; i < n; ++i) w *= weights[idx[static_cast<std::size_t>(i)]];
        fn(s, w);

        int pos = 0;
        while (pos < n) {
            if (++idx[static_cast<std::size_t>(pos)] < m) break;
            idx[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
}

}  // namespace

Rational exact_polykay_expectation(const std::vector<Rational>& values,
                                   const std::vector<Rational>& probs, int n,
                                   const IntegerPartition& lambda) {
    auto coeffs = polykay_coefficients(lambda, n);
    const int k = lambda.k();
    Rational acc = 0;
    enumerate_tuples(values, probs, n, k, [&](const std::vector<Rational>& s, const Rational& w) {
        Rational v = 0;
        for (const auto& [mu, c] : coeffs) {
            Rational mono = c;
            for (int part : mu.parts) mono *= s[static_cast<std::size_t>(part)];
            v += mono;
        }
        acc += w * v;
    });
    return acc;
}

Rational exact_factorial_ustat_expectation(const std::vector<Rational>& values,
                                           const std::vector<Rational>& probs, int n, int k) {
    if (k < 0) throw ValidationError("factorial moment estimator: order must be nonnegative");
    if (k > kMaxPartitionOrder)
        throw BoundsError("factorial moment estimator: order exceeds bound");
    struct Term {
        Integer d;
        int l;
        Rational sign_factor;
    };
    std::vector<Term> terms;
    for (const auto& lam : enumerate_partitions(k)) {
        Term t;
        auto st = partition_stats(lam);
        t.d = st.d_coeff;
        t.l = lam.length();
        t.sign_factor = 1;
        for (const auto& [j, r] : lam.multiplicities()) {
            Integer f = 1;
            for (int i = 0; i < r; ++i) f *= factorial(j - 1);
            t.sign_factor *= Rational(f);
            if ((j - 1) * r % 2 != 0) t.sign_factor = -t.sign_factor;
        }
        terms.push_back(std::move(t));
    }
    Rational acc = 0;
    enumerate_tuples(values, probs, n, k, [&](const std::vector<Rational>& s, const Rational& w) {
        Rational v = 0;
        for (const auto& t : terms)
            v += Rational(t.d) * t.sign_factor * s[static_cast<std::size_t>(t.l)];
        acc += w * (v / Rational(n));
    });
    return acc;
}

}  // namespace photonstats
