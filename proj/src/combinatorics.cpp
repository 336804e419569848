#include "circlt/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "circlt/errors.hpp"

namespace circlt {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::uint64_t factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative argument");
    if (n > 20) throw std::overflow_error("factorial overflows 64 bits beyond 20!");
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

std::uint64_t double_factorial_odd(int k) {
    std::uint64_t r = 1;
    for (int m = 2 * k - 1; m > 1; m -= 2) r *= m;
    return r;
}

std::string to_string(IndexVariant v) {
    switch (v) {
        case IndexVariant::a_p: return "A_p";
        case IndexVariant::a_p_distinct: return "A_p_distinct";
        case IndexVariant::a_p_pairwise: return "A_p_pairwise";
        case IndexVariant::a_ps: return "A_ps";
        case IndexVariant::a_ps_distinct: return "A_ps_distinct";
        case IndexVariant::a_ps_pairwise: return "A_ps_pairwise";
    }
    return "?";
}

namespace {

void require_budget(std::size_t n, int p, double budget, const char* who) {
    const double iters = std::pow(static_cast<double>(n), p - 1);
    if (iters > budget)
        throw budget_error(std::string(who) + ": n^(p-1) = " + std::to_string(iters) +
                               " exceeds the enumeration budget " + std::to_string(budget),
                           iters, budget);
}

bool consecutive_distinct_ok(const std::vector<int>& t) {
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] == t[i - 1]) return false;
    return true;
}

bool pairwise_distinct_ok(const std::vector<int>& t) {
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j)
            if (t[i] == t[j]) return false;
    return true;
}

// Visit every tuple of A_p (free prefix + solved last coordinate) in
// lexicographic prefix order; fn receives the full tuple and its exact sum.
template <typename Fn>
void for_each_a_p(std::size_t n, int p, Fn&& fn) {
    std::vector<int> tuple(p, 0);
    if (p == 1) {
        fn(tuple, 0L);
        return;
    }
    const int free = p - 1;
    std::vector<long> sum(free + 1, 0);
    while (true) {
        const long rem = sum[free] % static_cast<long>(n);
        tuple[free] = static_cast<int>((static_cast<long>(n) - rem) % static_cast<long>(n));
        fn(tuple, sum[free] + tuple[free]);
        int d = free - 1;
        while (d >= 0 && tuple[d] + 1 == static_cast<int>(n)) --d;
        if (d < 0) break;
        ++tuple[d];
        for (int q = d; q < free; ++q) {
            if (q > d) tuple[q] = 0;
            sum[q + 1] = sum[q] + tuple[q];
        }
    }
}

}  // namespace

IndexFamily enumerate_index_family(std::size_t n, int p, IndexVariant variant,
                                   std::optional<int> s, bool keep_members, double budget) {
    if (n < 1 || p < 1) throw std::invalid_argument("enumerate_index_family: need n >= 1, p >= 1");
    const bool sum_level = variant == IndexVariant::a_ps ||
                           variant == IndexVariant::a_ps_distinct ||
                           variant == IndexVariant::a_ps_pairwise;
    if (sum_level && !s.has_value())
        throw std::invalid_argument("enumerate_index_family: A_ps variants need a sum level s");
    require_budget(n, p, budget, "enumerate_index_family");

    IndexFamily fam;
    fam.n = n;
    fam.p = p;
    fam.variant = variant;
    fam.s = sum_level ? *s : -1;

    // out-of-range sum level: count 0 (max possible sum is p(n-1) < pn)
    if (sum_level && (*s < 0 || *s > p - 1)) return fam;

    const bool consecutive = variant == IndexVariant::a_p_distinct ||
                             variant == IndexVariant::a_ps_distinct;
    const bool pairwise = variant == IndexVariant::a_p_pairwise ||
                          variant == IndexVariant::a_ps_pairwise;

    for_each_a_p(n, p, [&](const std::vector<int>& tuple, long exact_sum) {
        if (sum_level && exact_sum != static_cast<long>(*s) * static_cast<long>(n)) return;
        if (consecutive && !consecutive_distinct_ok(tuple)) return;
        if (pairwise && !pairwise_distinct_ok(tuple)) return;
        ++fam.count;
        if (keep_members) fam.members.push_back(tuple);
    });
    return fam;
}

std::vector<std::uint64_t> index_family_counts_by_level(std::size_t n, int p,
                                                        bool consecutive_distinct,
                                                        bool pairwise_distinct, double budget) {
    if (n < 1 || p < 1)
        throw std::invalid_argument("index_family_counts_by_level: need n >= 1, p >= 1");
    require_budget(n, p, budget, "index_family_counts_by_level");
    std::vector<std::uint64_t> counts(p, 0);
    for_each_a_p(n, p, [&](const std::vector<int>& tuple, long exact_sum) {
        if (consecutive_distinct && !consecutive_distinct_ok(tuple)) return;
        if (pairwise_distinct && !pairwise_distinct_ok(tuple)) return;
        counts[static_cast<std::size_t>(exact_sum / static_cast<long>(n))]++;
    });
    return counts;
}

Rational eulerian_density_exact(int p, int s, Convention convention) {
    if (p < 2) throw std::invalid_argument("eulerian_density: p must be >= 2");
    if (p > 16) throw std::overflow_error("eulerian_density: exact arithmetic limited to p <= 16");
    if (s < 0 || s > p - 1) return Rational(0);
    Rational acc(0);
    for (int k = 0; k <= s; ++k) {
        // (s-k)^{p-1}, exact
        Rational pw(1);
        for (int e = 0; e < p - 1; ++e) pw = pw * Rational(s - k);
        Rational term = Rational(static_cast<std::int64_t>(binomial(p, k))) * pw;
        acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    if (convention == Convention::normalized)
        acc = acc / Rational(static_cast<std::int64_t>(factorial(p - 1)));
    return acc;
}

double eulerian_density(int p, int s, Convention convention) {
    if (s < 0 || s > p - 1) return 0.0;  // out of range: density is 0
    return eulerian_density_exact(p, s, convention).to_double();
}

std::vector<DensityRow> density_limit_check(int p, const std::vector<std::size_t>& n_list,
                                            double budget) {
    std::vector<DensityRow> rows;
    for (std::size_t n : n_list) {
        const auto plain = index_family_counts_by_level(n, p, false, false, budget);
        const auto distinct = index_family_counts_by_level(n, p, true, false, budget);
        const double denom = std::pow(static_cast<double>(n), p - 1);
        for (int s = 0; s < p; ++s) {
            DensityRow row;
            row.n = n;
            row.p = p;
            row.s = s;
            row.count = plain[s];
            row.count_distinct = distinct[s];
            row.ratio = static_cast<double>(plain[s]) / denom;
            row.ratio_distinct = static_cast<double>(distinct[s]) / denom;
            row.density = eulerian_density(p, s, Convention::normalized);
            row.abs_error = std::abs(row.ratio - row.density);
            row.gap = plain[s] - distinct[s];
            rows.push_back(row);
        }
    }
    return rows;
}

ClusterDecomposition cluster_decompose(const VectorTupleSystem& system) {
    const std::size_t l = system.vectors.size();
    if (l == 0) throw std::invalid_argument("cluster_decompose: no vectors");

    ClusterDecomposition out;
    for (std::size_t k = 0; k < l; ++k) {
        std::vector<int> sorted = system.vectors[k];
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            out.total_multiplicity[sorted[i]]++;
            if (i == 0 || sorted[i] != sorted[i - 1]) out.cross_multiplicity[sorted[i]]++;
        }
    }

    // union-find: vectors sharing any coordinate value are connected
    std::vector<std::size_t> up(l);
    for (std::size_t i = 0; i < l; ++i) up[i] = i;
    auto find = [&](std::size_t x) {
        while (up[x] != x) { up[x] = up[up[x]]; x = up[x]; }
        return x;
    };
    std::map<int, std::size_t> first_owner;
    for (std::size_t k = 0; k < l; ++k)
        for (int v : system.vectors[k]) {
            auto [it, inserted] = first_owner.try_emplace(v, k);
            if (!inserted) up[find(k)] = find(it->second);
        }

    std::map<std::size_t, std::vector<std::size_t>> by_root;
    for (std::size_t k = 0; k < l; ++k) by_root[find(k)].push_back(k);
    for (auto& [root, block] : by_root) out.blocks.push_back(block);
    std::sort(out.blocks.begin(), out.blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

namespace {

// E[prod_k (b_{J_k} - E b_{J_k})] at t=1 via inclusion-exclusion over the
// centered factors; nonzero iff the tuple genuinely feeds the moment sums
bool centered_contribution_nonzero(const std::vector<const std::vector<int>*>& Js) {
    const std::size_t l = Js.size();
    auto plain_moment = [](const std::map<int, int>& mult) -> double {
        double w = 1.0;
        for (const auto& [v, c] : mult) {
            if (c % 2 == 1) return 0.0;
            w *= static_cast<double>(double_factorial_odd(c / 2));
        }
        return w;
    };
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << l); ++mask) {
        double term = 1.0;
        std::map<int, int> mult;
        int excluded = 0;
        for (std::size_t k = 0; k < l; ++k) {
            if (mask & (1u << k)) {
                // factor replaced by its mean
                std::map<int, int> own;
                for (int v : *Js[k]) own[v]++;
                term *= plain_moment(own);
                ++excluded;
            } else {
                for (int v : *Js[k]) mult[v]++;
            }
        }
        if (term == 0.0) continue;
        total += (excluded % 2 == 0 ? 1.0 : -1.0) * term * plain_moment(mult);
    }
    return std::abs(total) > 1e-9;  // values are integers at t=1
}

}  // namespace

std::uint64_t enumerate_B(std::size_t n, const std::vector<int>& powers, double budget,
                          std::uint64_t* nonzero_contribution) {
    const std::size_t l = powers.size();
    if (l == 0) throw std::invalid_argument("enumerate_B: empty power list");
    if (l > 16) throw std::invalid_argument("enumerate_B: more than 16 vectors unsupported");
    double work = 1.0;
    for (int p : powers) {
        if (p < 1) throw std::invalid_argument("enumerate_B: powers must be >= 1");
        work *= std::pow(static_cast<double>(n), p - 1);
    }
    if (work > budget)
        throw budget_error("enumerate_B: product of family sizes " + std::to_string(work) +
                               " exceeds the budget " + std::to_string(budget),
                           work, budget);

    std::vector<std::vector<std::vector<int>>> families;
    for (int p : powers)
        families.push_back(
            enumerate_index_family(n, p, IndexVariant::a_p, std::nullopt, true, budget).members);

    std::uint64_t count = 0;
    std::uint64_t nonzero = 0;
    std::vector<std::size_t> idx(l, 0);
    std::vector<const std::vector<int>*> Js(l);
    while (true) {
        for (std::size_t k = 0; k < l; ++k) Js[k] = &families[k][idx[k]];

        // (ii) every value of the union multiset has multiplicity >= 2
        bool mult_ok = true;
        {
            std::map<int, int> mult;
            for (auto* J : Js)
                for (int v : *J) mult[v]++;
            for (const auto& [v, c] : mult)
                if (c < 2) { mult_ok = false; break; }
        }
        // (i) the l vectors form one cluster
        if (mult_ok) {
            VectorTupleSystem sys;
            for (auto* J : Js) sys.vectors.push_back(*J);
            if (cluster_decompose(sys).blocks.size() == 1) {
                ++count;
                if (nonzero_contribution && centered_contribution_nonzero(Js)) ++nonzero;
            }
        }

        std::size_t d = l;
        while (d > 0 && ++idx[d - 1] == families[d - 1].size()) idx[--d] = 0;
        if (d == 0) break;
    }
    if (nonzero_contribution) *nonzero_contribution = nonzero;
    return count;
}

std::vector<PairPartition> pair_partitions(int l) {
    if (l % 2 == 1) return {};  // odd mixed moments vanish
    if (l < 0 || l > 12) throw std::invalid_argument("pair_partitions: need 0 <= l <= 12, even");
    std::vector<PairPartition> out;
    std::vector<int> free_items(l);
    for (int i = 0; i < l; ++i) free_items[i] = i;
    std::vector<std::pair<int, int>> current;
    // pair the smallest unpaired item with each remaining candidate
    auto rec = [&](auto&& self, std::vector<int>& items) -> void {
        if (items.empty()) {
            out.push_back(PairPartition{current});
            return;
        }
        const int head = items.front();
        for (std::size_t j = 1; j < items.size(); ++j) {
            std::vector<int> rest;
            for (std::size_t k = 1; k < items.size(); ++k)
                if (k != j) rest.push_back(items[k]);
            current.emplace_back(head, items[j]);
            self(self, rest);
            current.pop_back();
        }
    };
    if (l == 0) {
        out.push_back(PairPartition{});
        return out;
    }
    rec(rec, free_items);
    return out;
}

double wick_gaussian_product_moment(const std::map<int, int>& multiplicities, double t) {
    double value = 1.0;
    for (const auto& [index, count] : multiplicities) {
        if (count < 0) throw std::invalid_argument("wick moment: negative multiplicity");
        if (count == 0) continue;
        if (count % 2 == 1) return 0.0;
        const int k = count / 2;
        value *= std::pow(t, k) * static_cast<double>(double_factorial_odd(k));
    }
    return value;
}

}  // namespace circlt
