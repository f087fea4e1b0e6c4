#pragma once

#include <vector>

#include "photonstats/multi_index.hpp"
#include "photonstats/rational.hpp"

namespace photonstats {

inline constexpr int kMaxPartitionOrder = 20;
inline constexpr int kMaxMultiIndexOrder = 10;
inline constexpr int kMaxCycleOrder = 8;
inline constexpr int kMaxStirling = 512;

Integer factorial(int n);
Integer binomial(int n, int k);

// Weakly decreasing positive parts summing to k.
struct IntegerPartition {
    std::vector<int> parts;

    int k() const {
        int s = 0;
        for (int p : parts) s += p;
        return s;
    }
    int length() const { return static_cast<int>(parts.size()); }
    // (part value j, multiplicity r_j) for distinct parts, ascending j.
    std::vector<std::pair<int, int>> multiplicities() const;

    bool operator==(const IntegerPartition& o) const { return parts == o.parts; }
    bool operator<(const IntegerPartition& o) const { return parts < o.parts; }
};

struct PartitionStats {
    int l = 0;                // number of parts
    Integer m_factorial;      // r_1! r_2! ...
    Integer d_coeff;          // k! / ((1!)^{r_1} r_1! (2!)^{r_2} r_2! ...)
    Integer dprime_coeff;     // k! / (1^{r_1} r_1! 2^{r_2} r_2! ...)
};

PartitionStats partition_stats(const IntegerPartition& lambda);

// All partitions of k in reverse-lexicographic order, (k) first, (1^k) last.
// k = 0 yields the single empty partition.
std::vector<IntegerPartition> enumerate_partitions(int k, int bound = kMaxPartitionOrder);

// S(n, k), exact; zero when k > n.
Integer stirling2(int n, int k, int bound = kMaxStirling);

// Multiset of nonzero d-dimensional columns whose componentwise sum is k.
// Distinct columns stored in ascending lexicographic order with multiplicities.
struct MultiIndexPartition {
    std::vector<MultiIndex> columns;
    std::vector<int> multiplicities;

    int length() const {
        int s = 0;
        for (int r : multiplicities) s += r;
        return s;
    }
    int distinct() const { return static_cast<int>(columns.size()); }
};

std::vector<MultiIndexPartition> enumerate_multiindex_partitions(
    const MultiIndex& k, int bound = kMaxMultiIndexOrder);

// k! / (m(lambda)! lambda!) with k! = prod k_j!, lambda! = prod of factorials
// of all column entries counted with multiplicity.
Rational multiindex_coefficient(const MultiIndexPartition& lambda, const MultiIndex& k);

struct CycleClass {
    IntegerPartition type;
    Integer class_size;
};

std::vector<CycleClass> enumerate_cycle_classes(int k, int bound = kMaxCycleOrder);

Integer bell_number(int k);

}  // namespace photonstats
