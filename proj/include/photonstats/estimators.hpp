#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "photonstats/combinatorics.hpp"
#include "photonstats/errors.hpp"
#include "photonstats/matrix.hpp"
#include "photonstats/rational.hpp"

namespace photonstats {

inline constexpr int kMaxSpectralOrder = 6;
inline constexpr int kMaxEstimatorOrder = 6;

// Scalar sample with cached power sums s_j = sum_i x_i^j.
class Sample {
  public:
    explicit Sample(std::vector<Rational> values);
    static Sample from_doubles(const std::vector<double>& values);

    int n() const { return static_cast<int>(values_.size()); }
    const std::vector<Rational>& values() const { return values_; }
    Rational power_sum(int j) const;  // j >= 0; s_0 = n

  private:
    std::vector<Rational> values_;
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

// Coefficient of the power-sum monomial prod_i s_{mu_i} in the unbiased
// estimator of prod_i c_{lambda_i}, solved exactly for this sample size.
std::vector<std::pair<IntegerPartition, Rational>> polykay_coefficients(
    const IntegerPartition& lambda, int n);

// Unbiased estimator of the cumulant product c_{lambda_1} c_{lambda_2} ...
// over i.i.d. sampling. Requires n > degree.
Rational polykay_exact(const Sample& sample, const IntegerPartition& lambda);
double polykay(const Sample& sample, const IntegerPartition& lambda);

// U-statistic for the k-th factorial moment; equals (1/n) sum_i (x_i)_k.
Rational factorial_moment_ustat_exact(const Sample& sample, int k);
double factorial_moment_ustat(const Sample& sample, int k);

// Trace powers T_j = Tr[W^j] of one Hermitian matrix draw.
class SpectralSample {
  public:
    static SpectralSample from_matrix(const ZMatrix& w, double herm_tol = kHermitianTol);
    // traces[j-1] = T_j, exact values supplied directly.
    static SpectralSample from_traces(int d, std::vector<Rational> traces);
    static SpectralSample from_trace_doubles(int d, const std::vector<double>& traces);

    int dimension() const { return d_; }
    Rational trace_power(int j) const;  // 1-based; T_0 = d

  private:
    SpectralSample() = default;
    int d_ = 0;
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

// Estimator of (1/d^{l(lambda)}) Cum_lambda(Tr W) as a cycle-class-weighted
// polynomial in trace powers: prefactor * sum_mu w_mu prod_i T_{mu_i}.
struct SpectralWeights {
    Rational prefactor;  // prod over parts j of ((j-1)!)^{r_j}
    std::vector<std::pair<IntegerPartition, Rational>> weights;
};

SpectralWeights spectral_weights(const IntegerPartition& lambda, int d);

Rational spectral_polykay_exact(const SpectralSample& sample, const IntegerPartition& lambda);
double spectral_polykay(const SpectralSample& sample, const IntegerPartition& lambda);

}  // namespace photonstats
