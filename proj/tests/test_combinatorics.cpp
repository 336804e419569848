#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "circlt/combinatorics.hpp"
#include "circlt/errors.hpp"

using namespace circlt;

namespace {

// exhaustive oracle for |B_{P_l}|, written straight from the definitions
// and independent of the library path (no shared enumeration code)
std::uint64_t brute_B(std::size_t n, const std::vector<int>& powers) {
    // all of A_p by full p-coordinate scan
    auto family = [&](int p) {
        std::vector<std::vector<int>> out;
        std::vector<int> t(p, 0);
        while (true) {
            long sum = 0;
            for (int v : t) sum += v;
            if (sum % static_cast<long>(n) == 0) out.push_back(t);
            int d = p - 1;
            while (d >= 0 && ++t[d] == static_cast<int>(n)) t[d--] = 0;
            if (d < 0) break;
        }
        return out;
    };
    std::vector<std::vector<std::vector<int>>> fams;
    for (int p : powers) fams.push_back(family(p));

    const std::size_t l = powers.size();
    std::vector<std::size_t> idx(l, 0);
    std::uint64_t count = 0;
    while (true) {
        std::map<int, int> mult;
        for (std::size_t k = 0; k < l; ++k)
            for (int v : fams[k][idx[k]]) mult[v]++;
        bool ok = true;
        for (const auto& [v, c] : mult)
            if (c < 2) { ok = false; break; }
        if (ok) {
            // connectivity by repeated expansion from vector 0
            std::vector<bool> in_cluster(l, false);
            in_cluster[0] = true;
            bool grew = true;
            while (grew) {
                grew = false;
                for (std::size_t a = 0; a < l; ++a) {
                    if (in_cluster[a]) continue;
                    for (std::size_t b = 0; b < l && !in_cluster[a]; ++b) {
                        if (!in_cluster[b]) continue;
                        for (int va : fams[a][idx[a]])
                            for (int vb : fams[b][idx[b]])
                                if (va == vb) {
                                    in_cluster[a] = true;
                                    grew = true;
                                }
                    }
                }
            }
            ok = std::all_of(in_cluster.begin(), in_cluster.end(), [](bool x) { return x; });
        }
        if (ok) ++count;
        std::size_t d = l;
        while (d > 0 && ++idx[d - 1] == fams[d - 1].size()) idx[--d] = 0;
        if (d == 0) break;
    }
    return count;
}

}  // namespace

TEST_CASE("small exact helpers") {
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(10, 0) == 1);
    CHECK(binomial(4, 7) == 0);
    CHECK(factorial(0) == 1);
    CHECK(factorial(6) == 720);
    CHECK(double_factorial_odd(0) == 1);
    CHECK(double_factorial_odd(2) == 3);
    CHECK(double_factorial_odd(3) == 15);
}

TEST_CASE("index family enumeration: pinned small families") {
    const auto a23 = enumerate_index_family(3, 2, IndexVariant::a_p, std::nullopt, true);
    CHECK(a23.count == 3);
    const std::set<std::vector<int>> want{{0, 0}, {1, 2}, {2, 1}};
    CHECK(std::set<std::vector<int>>(a23.members.begin(), a23.members.end()) == want);

    const auto aps = enumerate_index_family(2, 2, IndexVariant::a_ps, 1, true);
    CHECK(aps.count == 1);
    CHECK(aps.members.front() == std::vector<int>{1, 1});

    const auto a1 = enumerate_index_family(17, 1, IndexVariant::a_p, std::nullopt, true);
    CHECK(a1.count == 1);
    CHECK(a1.members.front() == std::vector<int>{0});

    CHECK(enumerate_index_family(5, 3, IndexVariant::a_ps, 7).count == 0);
    CHECK(enumerate_index_family(5, 3, IndexVariant::a_ps, -1).count == 0);
}

TEST_CASE("index family counts: |A_p| = n^(p-1) and levels partition") {
    for (std::size_t n : {1u, 2u, 5u, 12u, 30u}) {
        for (int p = 1; p <= 4; ++p) {
            const auto counts = index_family_counts_by_level(n, p);
            std::uint64_t total = 0;
            for (auto c : counts) total += c;
            std::uint64_t expect = 1;
            for (int e = 0; e < p - 1; ++e) expect *= n;
            CHECK(total == expect);
        }
    }
    CHECK_THROWS_AS(index_family_counts_by_level(200, 6), budget_error);
}

TEST_CASE("distinctness variants") {
    // consecutive-distinct pairs (i, n-i), i != n-i
    const auto cons = enumerate_index_family(9, 2, IndexVariant::a_p_distinct);
    CHECK(cons.count == 8);  // i = 1..8
    const auto cons_even = enumerate_index_family(8, 2, IndexVariant::a_p_distinct);
    CHECK(cons_even.count == 6);  // i = 1..7 except i = 4

    // the pairwise variant is at most the consecutive one
    const auto c3 = enumerate_index_family(11, 3, IndexVariant::a_p_distinct);
    const auto p3 = enumerate_index_family(11, 3, IndexVariant::a_p_pairwise);
    CHECK(p3.count <= c3.count);
    // and pairwise-distinct members really are pairwise distinct
    const auto p3m = enumerate_index_family(7, 3, IndexVariant::a_p_pairwise, std::nullopt, true);
    for (const auto& m : p3m.members) {
        std::set<int> s(m.begin(), m.end());
        CHECK(s.size() == m.size());
    }
}

TEST_CASE("eulerian densities: exact rational values") {
    CHECK(eulerian_density(2, 0) == 0.0);
    CHECK(eulerian_density(2, 1) == 1.0);
    CHECK(eulerian_density(3, 1) == 0.5);
    CHECK(eulerian_density(3, 2) == 0.5);
    CHECK(eulerian_density(4, 1) == doctest::Approx(1.0 / 6.0));
    CHECK(eulerian_density(4, 2) == doctest::Approx(4.0 / 6.0));
    CHECK(eulerian_density(4, 3) == doctest::Approx(1.0 / 6.0));
    CHECK(eulerian_density(5, 7) == 0.0);   // out of range -> 0
    CHECK(eulerian_density(5, -1) == 0.0);

    for (int p = 2; p <= 10; ++p) {
        Rational sum(0);
        for (int s = 0; s <= p - 1; ++s) {
            const Rational f = eulerian_density_exact(p, s);
            CHECK(f.num() >= 0);
            sum = sum + f;
        }
        CHECK(sum == Rational(1));  // exact, not approximate

        Rational disp(0);
        for (int s = 0; s <= p - 1; ++s)
            disp = disp + eulerian_density_exact(p, s, Convention::display);
        CHECK(disp == Rational(static_cast<std::int64_t>(factorial(p - 1))));
    }
}

TEST_CASE("density ratios approach the densities") {
    const auto rows2 = density_limit_check(2, {200});
    for (const auto& r : rows2)
        if (r.s == 1) {
            CHECK(r.count == 199);  // (i, n-i), i = 1..199
            CHECK(std::abs(r.ratio - 1.0) <= 0.01);
        }

    const auto rows3 = density_limit_check(3, {100});
    for (const auto& r : rows3) {
        if (r.s == 1) CHECK(std::abs(r.ratio - 0.5) <= 0.05);
        if (r.s == 2) CHECK(std::abs(r.ratio - 0.5) <= 0.05);
        if (r.s == 0) CHECK(r.count == 1);  // only (0,0,0)
    }

    // primed-variant gap grows like n^{p-2} = n, not n^2
    const auto g20 = density_limit_check(3, {20}).at(1).gap;
    const auto g80 = density_limit_check(3, {80}).at(1).gap;
    CHECK(g80 >= g20);
    CHECK(static_cast<double>(g80) / static_cast<double>(g20) < 8.0);
}

TEST_CASE("cluster decomposition") {
    // n=3 vectors: (0,0) alone; (1,2) and (2,1) share values
    const auto dec = cluster_decompose({{{0, 0}, {1, 2}, {2, 1}}});
    CHECK(dec.blocks.size() == 2);
    CHECK(dec.blocks[0] == std::vector<std::size_t>{0});
    CHECK(dec.blocks[1] == std::vector<std::size_t>{1, 2});
    CHECK(dec.total_multiplicity.at(0) == 2);
    CHECK(dec.total_multiplicity.at(1) == 2);
    CHECK(dec.cross_multiplicity.at(1) == 2);

    const auto same = cluster_decompose({{{4, 4, 4}, {4, 4, 4}}});
    CHECK(same.blocks.size() == 1);

    const auto disjoint = cluster_decompose({{{0, 1}, {2, 3}, {4, 5}}});
    CHECK(disjoint.blocks.size() == 3);
}

TEST_CASE("cluster decomposition is permutation invariant") {
    const std::vector<std::vector<int>> vecs{{0, 1}, {1, 2}, {5, 6}, {6, 7}, {3, 3}};
    const auto base = cluster_decompose({vecs});
    // permute and compare the induced partition through the permutation
    const std::vector<std::size_t> perm{4, 2, 0, 3, 1};
    std::vector<std::vector<int>> shuffled(vecs.size());
    for (std::size_t i = 0; i < vecs.size(); ++i) shuffled[i] = vecs[perm[i]];
    const auto moved = cluster_decompose({shuffled});

    auto canonical = [](const ClusterDecomposition& d,
                        const std::vector<std::size_t>* relabel) {
        std::set<std::set<std::size_t>> out;
        for (const auto& b : d.blocks) {
            std::set<std::size_t> blk;
            for (auto i : b) blk.insert(relabel ? (*relabel)[i] : i);
            out.insert(blk);
        }
        return out;
    };
    CHECK(canonical(base, nullptr) == canonical(moved, &perm));
}

TEST_CASE("pair partitions") {
    CHECK(pair_partitions(2).size() == 1);
    CHECK(pair_partitions(4).size() == 3);
    CHECK(pair_partitions(6).size() == 15);
    CHECK(pair_partitions(8).size() == 105);
    CHECK(pair_partitions(3).empty());
    CHECK(pair_partitions(5).empty());

    for (const auto& pp : pair_partitions(6)) {
        std::set<int> seen;
        for (const auto& [y, z] : pp.pairs) {
            CHECK(y < z);
            seen.insert(y);
            seen.insert(z);
        }
        CHECK(seen.size() == 6);
    }
}

TEST_CASE("gaussian product moments") {
    CHECK(wick_gaussian_product_moment({{0, 1}, {1, 1}}, 1.0) == 0.0);
    CHECK(wick_gaussian_product_moment({{0, 4}}, 2.0) == doctest::Approx(3.0 * 4.0));  // 3 t^2
    CHECK(wick_gaussian_product_moment({{0, 2}, {1, 2}}, 3.0) == doctest::Approx(9.0));  // t^2
    CHECK(wick_gaussian_product_moment({{5, 6}}, 1.0) == doctest::Approx(15.0));
    CHECK(wick_gaussian_product_moment({}, 1.0) == 1.0);
}

TEST_CASE("cluster tuple counts |B|") {
    // golden fixture fixed by the exhaustive oracle
    CHECK(enumerate_B(2, {2, 2}) == 2);
    CHECK(brute_B(2, {2, 2}) == 2);

    // oracle-computed counts for the (2,2,2) family: 4n-6 for even n
    const std::vector<std::size_t> ns{4, 6, 8, 10, 12};
    const std::vector<std::uint64_t> frozen{10, 18, 26, 34, 42};
    for (std::size_t i = 0; i < ns.size(); ++i) {
        CHECK(enumerate_B(ns[i], {2, 2, 2}) == frozen[i]);
        if (ns[i] <= 8) CHECK(brute_B(ns[i], {2, 2, 2}) == frozen[i]);
    }

    // p_i = 1 handled verbatim, no special-casing: J=(0) forces J'=(0,0)
    CHECK(enumerate_B(3, {1, 2}) == 1);
    CHECK(brute_B(3, {1, 2}) == 1);

    // never exceeds the full product of family sizes
    CHECK(enumerate_B(5, {2, 2}) <= 25);
    CHECK(enumerate_B(4, {3, 3}) <= 16 * 16);
    CHECK(enumerate_B(4, {3, 3}) == brute_B(4, {3, 3}));

    // tuples with nonzero centered contribution stay O(1): only the
    // all-(0,0) triple for odd n, plus the all-(n/2,n/2) triple for even n
    std::uint64_t nonzero = 0;
    enumerate_B(5, {2, 2, 2}, 1e8, &nonzero);
    CHECK(nonzero == 1);
    enumerate_B(4, {2, 2, 2}, 1e8, &nonzero);
    CHECK(nonzero == 2);
    enumerate_B(12, {2, 2, 2}, 1e8, &nonzero);
    CHECK(nonzero == 2);

    CHECK_THROWS_AS(enumerate_B(100, {4, 4, 4}, 1e6), budget_error);
}
