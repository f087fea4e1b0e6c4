#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <vector>

#include "photonstats/estimators.hpp"
#include "photonstats/model_io.hpp"
#include "photonstats/photon_stats.hpp"
#include "photonstats/simulation.hpp"

using namespace photonstats;
using C = std::complex<double>;

namespace {

ZMatrix scalar_model(double s) {
    ZMatrix m(1, 1);
    m << C(s, 0);
    return m;
}

ZMatrix sigma2(C off) {
    ZMatrix s(2, 2);
    s << C(1, 0), off, std::conj(off), C(1, 0);
    return s;
}

ZVector vec2(C a, C b) {
    ZVector v(2);
    v << a, b;
    return v;
}

WishartModel shared_mean_model() {
    ZVector m = vec2(C(0.3, 0), C(0, 0.2));
    return make_wishart_model(sigma2(C(0.2, 0.1)), 2, {m, m});
}

// Fixed 3-pixel covariance at small mass so pmf series converge plainly.
WishartModel model3() {
    ZMatrix s(3, 3);
    s << C(0.10, 0), C(0.03, 0.02), C(0.01, -0.01),  //
        C(0.03, -0.02), C(0.08, 0), C(0.0, 0.02),    //
        C(0.01, 0.01), C(0.0, -0.02), C(0.12, 0);
    ZVector m1(3), m2(3);
    m1 << C(0.2, 0), C(0, 0.1), C(0.1, 0);
    m2 << C(0.1, 0), C(0, 0), C(0.2, -0.1);
    return make_wishart_model(s, 2, {m1, m2});
}

struct MeanSe {
    double mean = 0, se = 0;
};

MeanSe mean_se(const std::vector<double>& xs) {
    double n = static_cast<double>(xs.size());
    double m = 0;
    for (double x : xs) m += x;
    m /= n;
    double v = 0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= n - 1;
    return {m, std::sqrt(v / n)};
}

// Nonlinear functionals: estimate per block, se of the block mean.
MeanSe block_se(int n, int blocks, const std::function<double(int, int)>& stat) {
    int chunk = n / blocks;
    std::vector<double> vals;
    for (int b = 0; b < blocks; ++b) vals.push_back(stat(b * chunk, (b + 1) * chunk));
    return mean_se(vals);
}

void check_band(double analytic, const MeanSe& mc) {
    CHECK(std::abs(mc.mean - analytic) <= 3 * mc.se + 1e-12);
}

double falling_d(double x, int k) {
    double v = 1;
    for (int i = 0; i < k; ++i) v *= x - i;
    return v;
}

}  // namespace

TEST_CASE("sampling determinism") {
    auto model = make_wishart_model(sigma2(C(0.25, 0.1)), 2,
                                    {vec2(C(0.5, 0), C(0, 0.3)), vec2(C(0.2, 0), C(0.1, 0))});
    RngStream rng{42, 0};

    auto a = sample_intensities(model, 500, rng);
    auto b = sample_intensities(model, 500, rng);
    CHECK(a.intensities == b.intensities);
    CHECK(a.model_digest == model_digest(model));
    CHECK(!a.model_digest.empty());

    auto c = sample_intensities(model, 500, RngStream{42, 1});
    CHECK(a.intensities != c.intensities);
    auto e = sample_intensities(model, 500, RngStream{43, 0});
    CHECK(a.intensities != e.intensities);

    // worker-count invariance, counts included
    auto a4 = sample_intensities(model, 500, rng, 4);
    CHECK(a.intensities == a4.intensities);
    auto ct1 = sample_counts(model, 500, rng, 1);
    auto ct3 = sample_counts(model, 500, rng, 3);
    CHECK(ct1.counts == ct3.counts);
    CHECK(ct1.intensities == ct3.intensities);
    // the count path draws intensities from the same per-draw stream
    CHECK(ct1.intensities == a.intensities);

    auto r1 = sample_counts_randomized(shared_mean_model(), count_poisson(1.5), 200, rng, 1);
    auto r2 = sample_counts_randomized(shared_mean_model(), count_poisson(1.5), 200, rng, 2);
    CHECK(r1.counts == r2.counts);
}

TEST_CASE("intensity sampling statistics") {
    auto model = make_wishart_model(sigma2(C(0.25, 0.1)), 2,
                                    {vec2(C(0.5, 0), C(0, 0.3)), vec2(C(0.2, 0), C(0.1, 0))});
    const int n = 400000;
    auto batch = sample_intensities(model, n, RngStream{7, 0}, 4);

    for (int j = 0; j < 2; ++j) {
        std::vector<double> col(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            col[static_cast<std::size_t>(i)] =
                batch.intensities[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        MultiIndex unit{j == 0 ? 1 : 0, j == 0 ? 0 : 1};
        double truth = joint_intensity_moment(model, unit);
        check_band(truth, mean_se(col));
    }

    // mixed product moment picks up the covariance structure and the means
    std::vector<double> prod(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        prod[static_cast<std::size_t>(i)] = batch.intensities[static_cast<std::size_t>(i)][0] *
                                            batch.intensities[static_cast<std::size_t>(i)][1];
    check_band(joint_intensity_moment(model, MultiIndex{1, 1}), mean_se(prod));

    // diagonal covariance, no means: pixel intensities are independent
    auto diag = make_wishart_model(sigma2(C(0, 0)), 2);
    auto db = sample_intensities(diag, n, RngStream{8, 0}, 4);
    MeanSe cov = block_se(n, 25, [&](int lo, int hi) {
        double m1 = 0, m2 = 0;
        for (int i = lo; i < hi; ++i) {
            m1 += db.intensities[static_cast<std::size_t>(i)][0];
            m2 += db.intensities[static_cast<std::size_t>(i)][1];
        }
        m1 /= hi - lo;
        m2 /= hi - lo;
        double cv = 0;
        for (int i = lo; i < hi; ++i)
            cv += (db.intensities[static_cast<std::size_t>(i)][0] - m1) *
                  (db.intensities[static_cast<std::size_t>(i)][1] - m2);
        return cv / (hi - lo - 1);
    });
    check_band(0.0, cov);
}

TEST_CASE("count sampling statistics") {
    // single-mode thermal light: counts are geometric
    auto geo = make_wishart_model(scalar_model(0.5), 1);
    const int n = 300000;
    auto batch = sample_counts(geo, n, RngStream{11, 0}, 4);
    int zeros = 0;
    double mean = 0;
    for (const auto& row : batch.counts) {
        zeros += row[0] == 0;
        mean += static_cast<double>(row[0]);
    }
    double p0 = static_cast<double>(zeros) / n;
    double se0 = std::sqrt(p0 * (1 - p0) / n);
    CHECK(std::abs(p0 - 2.0 / 3.0) <= 3 * se0);
    CHECK(std::abs(mean / n - 0.5) <= 3 * std::sqrt(overall_cumulant(geo, 2) / n));

    // cross-pixel count covariance matches the analytic joint cumulant
    auto model = make_wishart_model(sigma2(C(0.6, 0.2)), 2);
    auto cb = sample_counts(model, n, RngStream{12, 0}, 4);
    MeanSe cov = block_se(n, 25, [&](int lo, int hi) {
        double m1 = 0, m2 = 0;
        for (int i = lo; i < hi; ++i) {
            m1 += static_cast<double>(cb.counts[static_cast<std::size_t>(i)][0]);
            m2 += static_cast<double>(cb.counts[static_cast<std::size_t>(i)][1]);
        }
        m1 /= hi - lo;
        m2 /= hi - lo;
        double cv = 0;
        for (int i = lo; i < hi; ++i)
            cv += (static_cast<double>(cb.counts[static_cast<std::size_t>(i)][0]) - m1) *
                  (static_cast<double>(cb.counts[static_cast<std::size_t>(i)][1]) - m2);
        return cv / (hi - lo - 1);
    });
    double analytic = joint_cumulant(model, MultiIndex{1, 1});
    CHECK(analytic == doctest::Approx(2 * 0.4).epsilon(1e-12));  // p |sigma_12|^2
    check_band(analytic, cov);
}

TEST_CASE("conditional count sampling") {
    // frozen intensities: counts are independent Poisson with those rates
    std::vector<double> lam{0.7, 1.3};
    const int n = 200000;
    std::vector<std::vector<long long>> rows;
    rows.reserve(n);
    for (int i = 0; i < n; ++i)
        rows.push_back(sample_poisson_vector(lam, RngStream{21, 0}, static_cast<std::uint64_t>(i)));

    for (int j = 0; j < 2; ++j) {
        std::vector<double> col(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            col[static_cast<std::size_t>(i)] =
                static_cast<double>(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        auto ms = mean_se(col);
        check_band(lam[static_cast<std::size_t>(j)], ms);
        MeanSe var = block_se(n, 25, [&](int lo, int hi) {
            double m = 0;
            for (int i = lo; i < hi; ++i) m += col[static_cast<std::size_t>(i)];
            m /= hi - lo;
            double v = 0;
            for (int i = lo; i < hi; ++i) {
                double dd = col[static_cast<std::size_t>(i)] - m;
                v += dd * dd;
            }
            return v / (hi - lo - 1);
        });
        check_band(lam[static_cast<std::size_t>(j)], var);
    }

    // the rate split above the product-method cutoff stays Poisson
    std::vector<double> big{70.5};
    std::vector<double> xs(100000);
    for (int i = 0; i < 100000; ++i)
        xs[static_cast<std::size_t>(i)] = static_cast<double>(
            sample_poisson_vector(big, RngStream{22, 0}, static_cast<std::uint64_t>(i))[0]);
    check_band(70.5, mean_se(xs));
    MeanSe var = block_se(100000, 25, [&](int lo, int hi) {
        double m = 0;
        for (int i = lo; i < hi; ++i) m += xs[static_cast<std::size_t>(i)];
        m /= hi - lo;
        double v = 0;
        for (int i = lo; i < hi; ++i) {
            double dd = xs[static_cast<std::size_t>(i)] - m;
            v += dd * dd;
        }
        return v / (hi - lo - 1);
    });
    check_band(70.5, var);
}

TEST_CASE("wishart matrix sampling") {
    auto model = make_wishart_model(sigma2(C(0.3, -0.2)), 2,
                                    {vec2(C(0.4, 0), C(0, 0.2)), vec2(C(0.1, 0.1), C(0.3, 0))});
    const int n = 60000;
    std::vector<double> traces(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ZMatrix w = sample_wishart(model, RngStream{31, 0}, static_cast<std::uint64_t>(i));
        traces[static_cast<std::size_t>(i)] = w.trace().real();
    }
    check_band(to_double(trace_moment_exact(model, 1)), mean_se(traces));
    // distinguishes the corrected second trace cumulant from its sign variant
    double k2 = to_double(trace_cumulant_exact(model, 2));
    MeanSe var = block_se(n, 20, [&](int lo, int hi) {
        double m = 0;
        for (int i = lo; i < hi; ++i) m += traces[static_cast<std::size_t>(i)];
        m /= hi - lo;
        double v = 0;
        for (int i = lo; i < hi; ++i) {
            double dd = traces[static_cast<std::size_t>(i)] - m;
            v += dd * dd;
        }
        return v / (hi - lo - 1);
    });
    check_band(k2, var);
    std::vector<double> sq(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        sq[static_cast<std::size_t>(i)] =
            traces[static_cast<std::size_t>(i)] * traces[static_cast<std::size_t>(i)];
    check_band(to_double(trace_moment_exact(model, 2)), mean_se(sq));
}

TEST_CASE("analytic statistics match simulation") {
    auto model = model3();
    const int n = 300000;
    auto batch = sample_counts(model, n, RngStream{101, 0}, 4);

    std::vector<double> total(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& row = batch.counts[static_cast<std::size_t>(i)];
        total[static_cast<std::size_t>(i)] = static_cast<double>(row[0] + row[1] + row[2]);
    }

    SUBCASE("overall moments and factorial moments") {
        for (int k = 1; k <= 3; ++k) {
            std::vector<double> pw(static_cast<std::size_t>(n)), ff(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                pw[static_cast<std::size_t>(i)] = std::pow(total[static_cast<std::size_t>(i)], k);
                ff[static_cast<std::size_t>(i)] = falling_d(total[static_cast<std::size_t>(i)], k);
            }
            check_band(overall_moment(model, k), mean_se(pw));
            check_band(overall_factorial_moment(model, k), mean_se(ff));
        }
    }

    SUBCASE("overall cumulants and factorial cumulants") {
        auto emp = empirical_cumulants(total, 3);
        for (int k = 1; k <= 3; ++k)
            CHECK(std::abs(emp.values[static_cast<std::size_t>(k - 1)] -
                           overall_cumulant(model, k)) <=
                  3 * emp.std_errors[static_cast<std::size_t>(k - 1)]);

        // factorial cumulants via the plug-in transform of factorial moments
        for (int k = 2; k <= 3; ++k) {
            MeanSe fc = block_se(n, 25, [&](int lo, int hi) {
                double f1 = 0, f2 = 0, f3 = 0;
                for (int i = lo; i < hi; ++i) {
                    double t = total[static_cast<std::size_t>(i)];
                    f1 += t;
                    f2 += falling_d(t, 2);
                    f3 += falling_d(t, 3);
                }
                double m = hi - lo;
                f1 /= m;
                f2 /= m;
                f3 /= m;
                return k == 2 ? f2 - f1 * f1 : f3 - 3 * f2 * f1 + 2 * f1 * f1 * f1;
            });
            check_band(overall_factorial_cumulant(model, k), fc);
        }
    }

    SUBCASE("overall pmf") {
        std::vector<int> freq(6, 0);
        for (double t : total)
            if (t < 6) ++freq[static_cast<std::size_t>(t)];
        for (int k = 0; k <= 2; ++k) {
            auto sr = overall_pmf(model, k);
            REQUIRE(sr.converged);
            double p = static_cast<double>(freq[static_cast<std::size_t>(k)]) / n;
            double se = std::sqrt(p * (1 - p) / n);
            CHECK(std::abs(p - sr.value) <= 3 * se);
        }
    }

    SUBCASE("joint moments and cumulants") {
        std::vector<double> n1(static_cast<std::size_t>(n)), n2(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            n1[static_cast<std::size_t>(i)] =
                static_cast<double>(batch.counts[static_cast<std::size_t>(i)][0]);
            n2[static_cast<std::size_t>(i)] =
                static_cast<double>(batch.counts[static_cast<std::size_t>(i)][1]);
        }
        std::vector<double> m11(static_cast<std::size_t>(n)), m21(static_cast<std::size_t>(n)),
            f12(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            m11[static_cast<std::size_t>(i)] =
                n1[static_cast<std::size_t>(i)] * n2[static_cast<std::size_t>(i)];
            m21[static_cast<std::size_t>(i)] = n1[static_cast<std::size_t>(i)] *
                                               n1[static_cast<std::size_t>(i)] *
                                               n2[static_cast<std::size_t>(i)];
            f12[static_cast<std::size_t>(i)] = n1[static_cast<std::size_t>(i)] *
                                               falling_d(n2[static_cast<std::size_t>(i)], 2);
        }
        check_band(joint_moment(model, MultiIndex{1, 1, 0}), mean_se(m11));
        check_band(joint_moment(model, MultiIndex{2, 1, 0}), mean_se(m21));
        check_band(joint_factorial_moment(model, MultiIndex{1, 2, 0}), mean_se(f12));

        // covariance matches the standard joint cumulant (and its factorial
        // twin, identical at unit orders)
        MeanSe cov = block_se(n, 25, [&](int lo, int hi) {
            double a = 0, b = 0;
            for (int i = lo; i < hi; ++i) {
                a += n1[static_cast<std::size_t>(i)];
                b += n2[static_cast<std::size_t>(i)];
            }
            a /= hi - lo;
            b /= hi - lo;
            double cv = 0;
            for (int i = lo; i < hi; ++i)
                cv += (n1[static_cast<std::size_t>(i)] - a) * (n2[static_cast<std::size_t>(i)] - b);
            return cv / (hi - lo - 1);
        });
        double jc = joint_cumulant(model, MultiIndex{1, 1, 0});
        check_band(jc, cov);
        CHECK(joint_factorial_cumulant(model, MultiIndex{1, 1, 0}) == doctest::Approx(jc));
    }

    SUBCASE("joint pmf") {
        int c00 = 0, c10 = 0;
        for (int i = 0; i < n; ++i) {
            const auto& row = batch.counts[static_cast<std::size_t>(i)];
            c00 += row[0] == 0 && row[1] == 0 && row[2] == 0;
            c10 += row[0] == 1 && row[1] == 0 && row[2] == 0;
        }
        auto s00 = joint_pmf_series(model, MultiIndex{0, 0, 0}, 8, SeriesAccel::none, 1e-3, 8);
        REQUIRE(s00.converged);
        double p = static_cast<double>(c00) / n;
        CHECK(std::abs(p - s00.value) <= 3 * std::sqrt(p * (1 - p) / n));
        auto s10 = joint_pmf_series(model, MultiIndex{1, 0, 0}, 7, SeriesAccel::none, 1e-3, 8);
        REQUIRE(s10.converged);
        p = static_cast<double>(c10) / n;
        CHECK(std::abs(p - s10.value) <= 3 * std::sqrt(p * (1 - p) / n));
    }
}

TEST_CASE("randomized wave count sampling") {
    auto base = make_wishart_model(scalar_model(0.75), 1);
    auto count = count_poisson(1.5);
    const int n = 300000;
    auto batch = sample_counts_randomized(base, count, n, RngStream{55, 0}, 4);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] =
            static_cast<double>(batch.counts[static_cast<std::size_t>(i)][0]);

    check_band(randomized_stat(base, count, RandomizedKind::cumulant, 1), mean_se(xs));
    std::vector<double> sq(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        sq[static_cast<std::size_t>(i)] =
            xs[static_cast<std::size_t>(i)] * xs[static_cast<std::size_t>(i)];
    check_band(randomized_stat(base, count, RandomizedKind::moment, 2), mean_se(sq));
    std::vector<double> ff(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        ff[static_cast<std::size_t>(i)] = falling_d(xs[static_cast<std::size_t>(i)], 2);
    check_band(randomized_stat(base, count, RandomizedKind::factorial_moment, 2), mean_se(ff));

    // deterministic wave count reduces to the fixed-p sampler in law
    auto det = sample_counts_randomized(base, count_deterministic(3), 200000, RngStream{56, 0}, 4);
    auto fixed = make_wishart_model(scalar_model(0.75), 3);
    std::vector<double> ds(200000);
    for (int i = 0; i < 200000; ++i)
        ds[static_cast<std::size_t>(i)] =
            static_cast<double>(det.counts[static_cast<std::size_t>(i)][0]);
    check_band(overall_moment(fixed, 2), [&] {
        std::vector<double> v(ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) v[i] = ds[i] * ds[i];
        return mean_se(v);
    }());

    CHECK_THROWS_AS(sample_counts_randomized(base, count_custom({1.5, 4.0}), 10, RngStream{1, 0}),
                    ValidationError);
    auto two_means = make_wishart_model(sigma2(C(0, 0)), 2,
                                        {vec2(C(0.5, 0), C(0, 0)), vec2(C(0.1, 0), C(0, 0))});
    CHECK_THROWS_AS(sample_counts_randomized(two_means, count, 10, RngStream{1, 0}),
                    ValidationError);
}

TEST_CASE("spectral estimator sampling") {
    // isotropic covariance: the spectral estimator is unbiased for the
    // dimension-normalized trace cumulants
    const int d = 4, p = 2;
    auto model = make_wishart_model(ZMatrix::Identity(d, d), p);
    auto w2 = spectral_weights(IntegerPartition{{2}}, d);
    auto w11 = spectral_weights(IntegerPartition{{1, 1}}, d);

    auto eval = [](const SpectralWeights& sw, double t1, double t2) {
        double acc = 0;
        for (const auto& [mu, c] : sw.weights) {
            double mono = to_double(c);
            for (int part : mu.parts) mono *= part == 1 ? t1 : t2;
            acc += mono;
        }
        return to_double(sw.prefactor) * acc;
    };

    const int n = 60000;
    std::vector<double> k1(static_cast<std::size_t>(n)), k2(static_cast<std::size_t>(n)),
        k11(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ZMatrix w = sample_wishart(model, RngStream{77, 0}, static_cast<std::uint64_t>(i));
        double t1 = w.trace().real();
        double t2 = (w * w).trace().real();
        k1[static_cast<std::size_t>(i)] = t1 / d;
        k2[static_cast<std::size_t>(i)] = eval(w2, t1, t2);
        k11[static_cast<std::size_t>(i)] = eval(w11, t1, t2);
    }
    // targets are (1/d^l) prod_i k_{lambda_i}(Tr W) with l parts:
    // (1): k_1/d = p; (2): k_2/d = p Tr(S^2)/d = p; (1,1): k_1^2/d^2 = p^2
    check_band(static_cast<double>(p), mean_se(k1));
    check_band(static_cast<double>(p), mean_se(k2));
    check_band(static_cast<double>(p * p), mean_se(k11));
}

TEST_CASE("empirical cumulant estimates") {
    SUBCASE("exact small-sample values") {
        auto emp = empirical_cumulants({1.0, 2.0, 3.0}, 2);
        CHECK(emp.values[0] == doctest::Approx(2.0));
        CHECK(emp.values[1] == doctest::Approx(1.0));
        // jackknife of the mean reproduces s/sqrt(n)
        CHECK(emp.std_errors[0] == doctest::Approx(1.0 / std::sqrt(3.0)));
        CHECK_THROWS_AS(empirical_cumulants({1.0, 2.0, 3.0}, 3), DofError);
        CHECK_THROWS_AS(empirical_cumulants(std::vector<double>{1.0, 2.0}, 0), ValidationError);
    }

    SUBCASE("geometric counts") {
        auto geo = make_wishart_model(scalar_model(1.0), 1);
        auto batch = sample_counts(geo, 200000, RngStream{61, 0}, 4);
        auto emp = empirical_cumulants(batch, 2);
        CHECK(std::abs(emp.values[1] - 2.0) <= 3 * emp.std_errors[1]);
        CHECK(overall_cumulant(geo, 2) == doctest::Approx(2.0));
    }

    SUBCASE("exponential intensities") {
        auto expo = make_wishart_model(scalar_model(1.0), 1);
        auto batch = sample_intensities(expo, 200000, RngStream{62, 0}, 4);
        auto emp = empirical_cumulants(batch, 3);
        CHECK(std::abs(emp.values[2] - 2.0) <= 3 * emp.std_errors[2]);
    }

    SUBCASE("wave additivity") {
        auto two = make_wishart_model(scalar_model(1.0), 2);
        auto batch = sample_intensities(two, 200000, RngStream{63, 0}, 4);
        auto emp = empirical_cumulants(batch, 2);
        // two independent waves double every intensity cumulant
        CHECK(std::abs(emp.values[1] - 2.0) <= 3 * emp.std_errors[1]);
    }
}

TEST_CASE("exact estimator expectations") {
    std::vector<Rational> coin{0, 1};
    CHECK(exact_polykay_expectation(coin, {}, 3, IntegerPartition{{2}}) == Rational(1, 4));
    CHECK(exact_polykay_expectation(coin, {}, 2, IntegerPartition{{1}}) == Rational(1, 2));
    CHECK(exact_polykay_expectation(coin, {}, 4, IntegerPartition{{1, 1}}) == Rational(1, 4));

    // weighted population: Bernoulli(2/3) variance
    CHECK(exact_polykay_expectation(coin, {Rational(1, 3), Rational(2, 3)}, 5,
                                    IntegerPartition{{2}}) == Rational(2, 9));

    // population {0,1,2}: cumulants 1, 2/3, 0; polykays multiply them
    std::vector<Rational> tri{0, 1, 2};
    CHECK(exact_polykay_expectation(tri, {}, 4, IntegerPartition{{1}}) == 1);
    CHECK(exact_polykay_expectation(tri, {}, 4, IntegerPartition{{2}}) == Rational(2, 3));
    CHECK(exact_polykay_expectation(tri, {}, 4, IntegerPartition{{1, 1}}) == 1);
    CHECK(exact_polykay_expectation(tri, {}, 4, IntegerPartition{{3}}) == 0);
    CHECK(exact_polykay_expectation(tri, {}, 4, IntegerPartition{{2, 1}}) == Rational(2, 3));
    CHECK(exact_polykay_expectation(tri, {}, 4, IntegerPartition{{1, 1, 1}}) == 1);

    // factorial-moment estimator is unbiased for the population mean of (x)_k
    CHECK(exact_factorial_ustat_expectation(tri, {}, 3, 1) == 1);
    CHECK(exact_factorial_ustat_expectation(tri, {}, 3, 2) == Rational(2, 3));
    CHECK(exact_factorial_ustat_expectation(tri, {}, 3, 3) == 0);
    CHECK(exact_factorial_ustat_expectation(coin, {Rational(1, 2), Rational(1, 2)}, 3, 1) ==
          Rational(1, 2));

    CHECK_THROWS_AS(
        exact_polykay_expectation({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, {}, 8, IntegerPartition{{2}}),
        BoundsError);
    CHECK_THROWS_AS(exact_polykay_expectation(coin, {Rational(1, 2), Rational(1, 3)}, 3,
                                              IntegerPartition{{2}}),
                    ValidationError);
    CHECK_THROWS_AS(exact_polykay_expectation(coin, {Rational(3, 2), Rational(-1, 2)}, 3,
                                              IntegerPartition{{2}}),
                    ValidationError);
    CHECK_THROWS_AS(exact_polykay_expectation(coin, {}, 2, IntegerPartition{{2}}), DofError);
}

TEST_CASE("batch csv round trip") {
    auto model = make_wishart_model(sigma2(C(0.25, 0.1)), 2);
    auto batch = sample_counts(model, 50, RngStream{91, 3});
    std::ostringstream out;
    write_batch_csv(batch, out);
    std::istringstream in(out.str());
    auto back = read_batch_csv(in);
    CHECK(back.n == batch.n);
    CHECK(back.d == batch.d);
    CHECK(back.seed == batch.seed);
    CHECK(back.stream_index == batch.stream_index);
    CHECK(back.model_digest == batch.model_digest);
    CHECK(back.counts == batch.counts);
    CHECK(back.intensities == batch.intensities);  // %.17g round-trips exactly

    // intensity-only batches keep their column group
    auto ib = sample_intensities(model, 20, RngStream{92, 0});
    std::ostringstream out2;
    write_batch_csv(ib, out2);
    std::istringstream in2(out2.str());
    auto back2 = read_batch_csv(in2);
    CHECK(back2.counts.empty());
    CHECK(back2.intensities == ib.intensities);

    // a batch column feeds the scalar sample reader (column 4 is count_2)
    std::istringstream in3(out.str());
    auto col = read_sample_column(in3, 4);
    CHECK(static_cast<int>(col.size()) == batch.n);
    for (int i = 0; i < batch.n; ++i)
        CHECK(col[static_cast<std::size_t>(i)] ==
              static_cast<double>(batch.counts[static_cast<std::size_t>(i)][1]));
}
