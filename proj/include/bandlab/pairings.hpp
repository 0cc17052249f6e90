#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "bandlab/rational.hpp"

namespace bandlab {

inline constexpr int kMaxPairPartitionK = 8;    // partitions of [2k]
inline constexpr int kMaxMomentOrder = 16;      // moment order n = 2k
inline constexpr int kMaxMixedTraceLetters = 12;

// Pair partition of {1, ..., 2k} in canonical form: pairs (a_i, b_i) with
// a_i < b_i and a_1 < a_2 < ... < a_k.
struct PairPartition {
    int k = 0;
    std::vector<std::pair<int, int>> pairs;
};

// Visits all (2k-1)!! canonical pair partitions in lexicographic order of
// (a_1, b_1, a_2, b_2, ...). The visited object is reused between calls.
void for_each_pair_partition(int k, const std::function<void(const PairPartition&)>& fn);

std::vector<PairPartition> enumerate_pair_partitions(int k);

bool is_noncrossing(const PairPartition& p);

// Number of orbits of gamma . pi, where gamma is the cyclic shift
// (1, 2, ..., 2k) and pi the partition read as an involution. Equals k+1
// exactly for noncrossing partitions.
int orbit_count(const PairPartition& p);

long long double_factorial(int n);  // n!! for odd n
long long catalan_number(int k);

// Counts partitions of [n], n = 2k, whose orbit number attains k+1.
long long catalan_limit_check(int n);

// Limit moments of the (1/sqrt(2*m*b)) scaling: sum over pair partitions of
// m^(orbit_count - k - 1). Exact; zero for odd n.
Rational gue_moment(int m, int n);

// Trace word nu = (nu_1, ..., nu_r): the statistic prod_i (tr H^i)^{nu_i}.
struct TraceWord {
    std::vector<int> exponents;
    int order() const;         // nu = sum nu_i
    int letter_count() const;  // L = sum i * nu_i
};

// Successor map on letter positions 0..L-1: positions are grouped into
// consecutive cycles, nu_i cycles of length i, and f advances one step
// within its cycle (wrapping at the cycle end).
std::vector<int> build_f_map(const TraceWord& word);

// Classes of the index system {t_a = t_f(b), t_b = t_f(a) for each pair}.
int free_index_count(const PairPartition& p, const TraceWord& word);

// Gaussian unitary moments of the trace word: sum over pair partitions of
// [L] of m^free_index_count. Exact integer; zero for odd L.
long long mixed_trace_gue(int m, const TraceWord& word);

// Gaussian orthogonal moments (1/m) < tr (H/sqrt(m))^n >: per pair either a
// twisted or a straight index identification, coincident pairs weighted 2.
Rational goe_moment(int m, int n);              // orientation-sum path
Rational goe_moment_bruteforce(int m, int n);   // direct index enumeration, m^n <= 1e8

}  // namespace bandlab
