#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "photonstats/combinatorics.hpp"
#include "photonstats/photon_stats.hpp"
#include "photonstats/rational.hpp"
#include "photonstats/wishart.hpp"

namespace photonstats {

// Counter-based stream: draw i of stream s under seed q is a pure function
// of (q, s, i), so chunked parallel generation is worker-count-invariant.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
};

struct SampleBatch {
    int n = 0;
    int d = 0;
    std::vector<std::vector<double>> intensities;  // n rows of d, may be empty
    std::vector<std::vector<long long>> counts;    // n rows of d, may be empty
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
    std::string model_digest;
};

// n draws of the intensity vector (diagonal of the accumulated wave matrix).
SampleBatch sample_intensities(const WishartModel& model, int n, const RngStream& rng,
                               int workers = 1);

// Intensities plus conditionally independent Poisson counts per pixel.
SampleBatch sample_counts(const WishartModel& model, int n, const RngStream& rng,
                          int workers = 1);

// Randomized wave count: the number of waves is drawn from the count model
// (deterministic or poisson) before each intensity draw; the model's first
// wave mean is shared by every wave.
SampleBatch sample_counts_randomized(const WishartModel& model, const CountModel& count, int n,
                                     const RngStream& rng, int workers = 1);

// One draw of the full wave matrix.
ZMatrix sample_wishart(const WishartModel& model, const RngStream& rng, std::uint64_t draw_index);

// Independent Poisson counts for a fixed intensity vector.
std::vector<long long> sample_poisson_vector(const std::vector<double>& intensities,
                                             const RngStream& rng, std::uint64_t draw_index);

struct EmpiricalCumulants {
    std::vector<double> values;      // k-statistics, orders 1..K
    std::vector<double> std_errors;  // jackknife standard errors
};

EmpiricalCumulants empirical_cumulants(const std::vector<double>& xs, int K);
// Column from a batch: counts when present, otherwise intensities.
EmpiricalCumulants empirical_cumulants(const SampleBatch& batch, int K, int pixel = 1);

// Exact expectation of an estimator over i.i.d. sampling from a finite
// population, by enumerating every ordered n-tuple with product weights.
// Empty probs means uniform. Enumeration budget: |population|^n <= 10^7.
Rational exact_polykay_expectation(const std::vector<Rational>& values,
                                   const std::vector<Rational>& probs, int n,
                                   const IntegerPartition& lambda);
Rational exact_factorial_ustat_expectation(const std::vector<Rational>& values,
                                           const std::vector<Rational>& probs, int n, int k);

}  // namespace photonstats
