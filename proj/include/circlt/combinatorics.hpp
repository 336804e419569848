#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "circlt/rational.hpp"

namespace circlt {

// ---------------------------------------------------------------------------
// Index families A_p / A_{p,s} and their distinct variants
// ---------------------------------------------------------------------------

/// Which index family to enumerate:
///   a_p            : sum of coordinates == 0 (mod n)
///   a_p_distinct   : same, consecutive coordinates distinct (i_1 != i_2 != ...)
///   a_ps           : sum of coordinates == s*n exactly
///   a_ps_distinct  : same, consecutive coordinates distinct
///   a_p_pairwise / a_ps_pairwise : all coordinates pairwise distinct
///     (the stricter reading of the distinctness chain; both are counted
///      so the discrepancy can be reported)
enum class IndexVariant {
    a_p,
    a_p_distinct,
    a_p_pairwise,
    a_ps,
    a_ps_distinct,
    a_ps_pairwise,
};

std::string to_string(IndexVariant v);

struct IndexFamily {
    std::size_t n = 0;
    int p = 0;
    IndexVariant variant = IndexVariant::a_p;
    int s = -1;                                    // sum level, a_ps variants only
    std::uint64_t count = 0;
    std::vector<std::vector<int>> members;         // populated only when requested
};

/// Exact enumeration of the requested family. Counting is O(n^{p-1})
/// (last coordinate solved mod n where the variant allows); guarded by the
/// iteration budget. Out-of-range s yields count 0 rather than an error.
IndexFamily enumerate_index_family(std::size_t n, int p, IndexVariant variant,
                                   std::optional<int> s = std::nullopt,
                                   bool keep_members = false,
                                   double budget = 1e8);

/// Counts for every sum level s = 0..p-1 in one sweep (used by the
/// counting reports; identical enumeration, one pass).
std::vector<std::uint64_t> index_family_counts_by_level(std::size_t n, int p,
                                                        bool consecutive_distinct = false,
                                                        bool pairwise_distinct = false,
                                                        double budget = 1e8);

// ---------------------------------------------------------------------------
// Limiting densities f_p(s)
// ---------------------------------------------------------------------------

enum class Convention { normalized, display };

/// f_p(s) as an exact rational: the alternating binomial sum
/// sum_{k=0}^{s} (-1)^k C(p,k) (s-k)^{p-1}, divided by (p-1)! under the
/// normalized convention (the default; it makes sum_s f_p(s) = 1 exactly,
/// matching |A_p| = n^{p-1}). The display convention omits the division.
Rational eulerian_density_exact(int p, int s, Convention convention = Convention::normalized);

/// Float boundary of the exact value; s outside 0..p-1 returns 0.
double eulerian_density(int p, int s, Convention convention = Convention::normalized);

struct DensityRow {
    std::size_t n = 0;
    int p = 0;
    int s = 0;
    std::uint64_t count = 0;           // |A_{p,s}|
    std::uint64_t count_distinct = 0;  // |A'_{p,s}| (consecutive-distinct)
    double ratio = 0;                  // |A_{p,s}| / n^{p-1}
    double ratio_distinct = 0;
    double density = 0;                // f_p(s), normalized convention
    double abs_error = 0;              // |ratio - density|
    std::uint64_t gap = 0;             // |A_{p,s}| - |A'_{p,s}|
};

/// Brute-force ratios |A_{p,s}|/n^{p-1} against f_p(s) for each n in
/// n_list, including the primed-variant gap (claimed O(n^{p-2})).
std::vector<DensityRow> density_limit_check(int p, const std::vector<std::size_t>& n_list,
                                            double budget = 1e8);

// ---------------------------------------------------------------------------
// Clusters
// ---------------------------------------------------------------------------

/// A tuple system J_1, ..., J_l with J_k viewed through its coordinate
/// multiset S_{J_k}.
struct VectorTupleSystem {
    std::vector<std::vector<int>> vectors;
};

struct ClusterDecomposition {
    /// Connected components (clusters) of the graph whose edges join
    /// vectors with intersecting coordinate multisets; each block lists
    /// vector indices, sorted, blocks ordered by smallest member.
    std::vector<std::vector<std::size_t>> blocks;
    /// Per coordinate value: total multiplicity across all vectors.
    std::map<int, int> total_multiplicity;
    /// Per coordinate value: number of distinct vectors containing it.
    std::map<int, int> cross_multiplicity;
};

/// Union-find over shared coordinate values.
ClusterDecomposition cluster_decompose(const VectorTupleSystem& system);

/// Exact |B_{P_l}|: tuples (J_1..J_l) in A_{p_1} x ... x A_{p_l} that form
/// a single cluster with every value of the union multiset appearing at
/// least twice. The definition is applied verbatim (no special cases).
/// `nonzero_contribution`, when given, additionally receives the number of
/// such tuples whose centered Gaussian product expectation
/// E[prod_k (b_{J_k} - E b_{J_k})] is nonzero at t=1 — the subset that
/// actually feeds the moment sums.
std::uint64_t enumerate_B(std::size_t n, const std::vector<int>& powers,
                          double budget = 1e8,
                          std::uint64_t* nonzero_contribution = nullptr);

// ---------------------------------------------------------------------------
// Pair partitions and Gaussian product moments
// ---------------------------------------------------------------------------

struct PairPartition {
    std::vector<std::pair<int, int>> pairs;  // each pair (y, z) with y < z, sorted
};

/// All (l-1)!! pair partitions of {0..l-1}; empty for odd l (odd mixed
/// moments vanish). l <= 12.
std::vector<PairPartition> pair_partitions(int l);

/// E[prod_q b_q^{c_q}] for independent N(0, t) coordinates with the given
/// multiplicities: 0 if any count is odd, else prod t^{k} (2k-1)!! over
/// counts 2k.
double wick_gaussian_product_moment(const std::map<int, int>& multiplicities, double t);

// small exact helpers shared across modules
std::uint64_t binomial(int n, int k);
std::uint64_t factorial(int n);
std::uint64_t double_factorial_odd(int k);  // (2k-1)!!, with k=0 -> 1

}  // namespace circlt
