#pragma once

#include <map>
#include <memory>
#include <vector>

#include "photonstats/matrix.hpp"
#include "photonstats/moment_algebra.hpp"
#include "photonstats/multi_index.hpp"

namespace photonstats {

inline constexpr int kMaxJointOrder = 6;

struct WishartCache;

// Immutable intensity model: I_j is the j-th diagonal entry of a noncentral
// Wishart matrix built from p independent circular complex Gaussian waves
// with common covariance sigma and per-wave means.
struct WishartModel {
    int d = 0;
    int p = 0;
    ZMatrix sigma;               // numeric, exactly Hermitian after ingestion
    std::vector<ZVector> means;  // size p, or empty when all means vanish
    ZMatrix mean_matrix;         // M = sum_i m_i m_i^H
    bool symmetrized = false;    // input needed the Hermitian averaging fallback

    CMatrix sigma_x;                            // exact mirror of sigma
    CMatrix mean_matrix_x;                      // exact mirror of M
    std::vector<std::vector<CRational>> means_x;  // exact mirrors of means

    std::shared_ptr<WishartCache> cache;

    bool has_means() const { return !means.empty(); }
};

WishartModel make_wishart_model(const ZMatrix& sigma, int p,
                                const std::vector<ZVector>& means = {},
                                double herm_tol = kHermitianTol);

// The p = 1 model carrying wave i's mean (i is 1-based).
WishartModel single_wave(const WishartModel& model, int i);

// Noncentrality matrix sigma^{-1} M.
ZMatrix omega(const WishartModel& model);

// Cumulants of Tr W: p (k-1)! Tr(sigma^k) + k! Tr(M sigma^{k-1}).
// The noncentral term enters with positive sign; the negative-sign variant
// contradicts the k = 1 mean E|X+m|^2 = sigma^2 + |m|^2 and fails the
// Monte-Carlo variance oracle (see the verification suite).
Rational trace_cumulant_exact(const WishartModel& model, int k);
double trace_cumulant(const WishartModel& model, int k);
std::vector<Rational> trace_cumulants_exact(const WishartModel& model, int K);

// E[(Tr W)^k] as the complete Bell polynomial of the trace cumulants.
Rational trace_moment_exact(const WishartModel& model, int k);
double trace_moment(const WishartModel& model, int k);
// Moment prefix to arbitrary order via the cumulant recurrence (used by the
// counting series, whose truncations exceed the partition bound).
std::vector<Rational> trace_moments_exact(const WishartModel& model, int K);

// Dual evaluation of the trace moment through the classical cyclic-polynomial
// double partition sum, reported verbatim next to the Bell-path value.
struct CyclicMomentReport {
    Rational cyclic_value;
    Rational bell_value;
    Rational deviation;  // cyclic - bell
};
CyclicMomentReport trace_moment_cyclic(const WishartModel& model, int k);

// Exact joint moments E[I_1^{k_1} ... I_d^{k_d}] by complex Wick expansion.
Rational joint_intensity_moment_exact(const WishartModel& model, const MultiIndex& k,
                                      int bound = kMaxJointOrder);
double joint_intensity_moment(const WishartModel& model, const MultiIndex& k,
                              int bound = kMaxJointOrder);
MultiTable<Rational> joint_intensity_moment_table(const WishartModel& model, int K,
                                                  int bound = kMaxJointOrder);

Rational joint_intensity_cumulant_exact(const WishartModel& model, const MultiIndex& k,
                                        int bound = kMaxJointOrder);
double joint_intensity_cumulant(const WishartModel& model, const MultiIndex& k,
                                int bound = kMaxJointOrder);
MultiTable<Rational> joint_intensity_cumulant_table(const WishartModel& model, int K,
                                                    int bound = kMaxJointOrder);

}  // namespace photonstats
