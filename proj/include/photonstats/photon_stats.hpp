#pragma once

#include <vector>

#include "photonstats/moment_algebra.hpp"
#include "photonstats/wishart.hpp"

namespace photonstats {

// Treatment of zero components in count multi-indices: marginalize drops the
// pixel (E[N^0] = 1); formal keeps the classical umbral convention that any
// zero component annihilates the moment.
enum class ZeroPolicy { marginalize, formal };

// Partition set feeding the joint count cumulant: standard sums over every
// multi-index partition (the plain multivariate moment-to-cumulant inversion,
// validated by simulation); restricted keeps only partitions whose columns
// have all entries nonzero, as classically documented. The verification suite reports the
// difference between the two.
enum class JointCumulantPolicy { standard, restricted };

enum class SeriesAccel { none, euler };

struct SeriesResult {
    double value = 0.0;
    int truncation_order = 0;
    double last_term_magnitude = 0.0;
    bool accelerated = false;
    bool converged = false;
};

inline constexpr int kDefaultTruncation = 40;
inline constexpr double kDefaultSeriesTol = 1e-10;

// Distribution of the wave count P for the randomized photocounting effect.
struct CountModel {
    enum class Kind { deterministic, poisson, custom };
    Kind kind = Kind::deterministic;
    int p = 1;                             // deterministic
    Rational mu = 0;                       // poisson
    std::vector<Rational> custom_moments;  // custom: declared moment prefix

    std::vector<Rational> moments(int K) const;
    std::vector<Rational> cumulants(int K) const;
};

CountModel count_deterministic(int p);
CountModel count_poisson(double mu);
CountModel count_custom(const std::vector<double>& moments);

enum class RandomizedKind { moment, factorial_moment, cumulant, factorial_cumulant };

// Overall photocounter N = N_1 + ... + N_d statistics.
Rational overall_factorial_moment_exact(const WishartModel& model, int i);
double overall_factorial_moment(const WishartModel& model, int i);
Rational overall_moment_exact(const WishartModel& model, int i);
double overall_moment(const WishartModel& model, int i);
Rational overall_cumulant_exact(const WishartModel& model, int k);
double overall_cumulant(const WishartModel& model, int k);
Rational overall_factorial_cumulant_exact(const WishartModel& model, int k);
double overall_factorial_cumulant(const WishartModel& model, int k);

// P(N = k) as the alternating series over trace moments, summed exactly and
// optionally Euler-transformed. Non-convergence is reported, not thrown.
SeriesResult overall_pmf(const WishartModel& model, int k, int truncation = kDefaultTruncation,
                         SeriesAccel accel = SeriesAccel::none,
                         double tol = kDefaultSeriesTol);

// Joint photocounter statistics over the d pixels.
Rational joint_moment_exact(const WishartModel& model, const MultiIndex& k,
                            ZeroPolicy policy = ZeroPolicy::marginalize,
                            int bound = kMaxJointOrder);
double joint_moment(const WishartModel& model, const MultiIndex& k,
                    ZeroPolicy policy = ZeroPolicy::marginalize, int bound = kMaxJointOrder);
Rational joint_factorial_moment_exact(const WishartModel& model, const MultiIndex& k,
                                      int bound = kMaxJointOrder);
double joint_factorial_moment(const WishartModel& model, const MultiIndex& k,
                              int bound = kMaxJointOrder);
Rational joint_cumulant_exact(const WishartModel& model, const MultiIndex& k,
                              JointCumulantPolicy policy = JointCumulantPolicy::standard,
                              int bound = kMaxJointOrder);
double joint_cumulant(const WishartModel& model, const MultiIndex& k,
                      JointCumulantPolicy policy = JointCumulantPolicy::standard,
                      int bound = kMaxJointOrder);
Rational joint_factorial_cumulant_exact(const WishartModel& model, const MultiIndex& k,
                                        int bound = kMaxJointOrder);
double joint_factorial_cumulant(const WishartModel& model, const MultiIndex& k,
                                int bound = kMaxJointOrder);

// P(N = k) for the joint counter; requires |k| + truncation within the joint
// moment bound, so callers raise `bound` together with the truncation.
SeriesResult joint_pmf_series(const WishartModel& model, const MultiIndex& k,
                              int truncation = kDefaultTruncation,
                              SeriesAccel accel = SeriesAccel::none,
                              double tol = kDefaultSeriesTol, int bound = kMaxJointOrder);

// Statistics of the randomized overall photocounter with wave count P.
// The model must carry one shared mean vector (or none); its own p is the
// deterministic reference, the base statistics come from the single wave.
Rational randomized_stat_exact(const WishartModel& model, const CountModel& count,
                               RandomizedKind kind, int k);
double randomized_stat(const WishartModel& model, const CountModel& count,
                       RandomizedKind kind, int k);

}  // namespace photonstats
