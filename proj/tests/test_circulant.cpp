#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "circlt/circulant.hpp"
#include "circlt/errors.hpp"
#include "circlt/rng.hpp"
#include "oracles.hpp"

using namespace circlt;

namespace {

CirculantSample random_sample(std::size_t n, std::uint64_t seed) {
    CirculantSample s;
    s.n = n;
    s.t = 1.0;
    s.entries.resize(n);
    const CounterRng rng(seed);
    for (std::size_t i = 0; i < n; ++i) s.entries[i] = rng.normal(i);
    return s;
}

}  // namespace

TEST_CASE("sample_at pulls the right entries") {
    TimeGrid g({0.0, 0.5, 1.0});
    const auto e = generate_ensemble(3, g, 4, 11);

    const auto zero = sample_at(e, 2, 0.0);
    for (double v : zero.entries) CHECK(v == 0.0);

    const auto s = sample_at(e, 1, 0.5);
    for (std::size_t i = 0; i < 3; ++i) CHECK(s.entries[i] == e.value(1, i, 1));

    // row 2 of the represented 3x3 matrix is (b_2, b_0, b_1)/sqrt(3)
    const double root3 = std::sqrt(3.0);
    CHECK(s.matrix_element(1, 0) == doctest::Approx(s.entries[2] / root3));
    CHECK(s.matrix_element(1, 1) == doctest::Approx(s.entries[0] / root3));
    CHECK(s.matrix_element(1, 2) == doctest::Approx(s.entries[1] / root3));

    // constant along wrapped diagonals
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(s.matrix_element(i, j) ==
                  s.matrix_element((i + 1) % 3, (j + 1) % 3));

    CHECK_THROWS_AS(sample_at(e, 0, 0.7), grid_error);
    CHECK_THROWS_AS(sample_at(e, 9, 0.5), std::out_of_range);
}

TEST_CASE("trace powers: pinned small cases") {
    // p = 0 -> n exactly; p = 1 -> sqrt(n) b_0
    const auto s = random_sample(7, 3);
    CHECK(trace_power_spectral(s, 0).value == 7.0);
    CHECK(trace_power_combinatorial(s, 1).value ==
          doctest::Approx(std::sqrt(7.0) * s.entries[0]).epsilon(1e-15));
    CHECK(trace_power_spectral(s, 1).value ==
          doctest::Approx(std::sqrt(7.0) * s.entries[0]).epsilon(1e-12));

    // n=2, p=2: entries (a,b) -> a^2 + b^2
    CirculantSample s2{2, {0.8, -1.3}, 1.0};
    CHECK(trace_power_combinatorial(s2, 2).value ==
          doctest::Approx(0.8 * 0.8 + 1.3 * 1.3).epsilon(1e-15));

    // n=3, p=2: entries (a,b,c) -> a^2 + 2bc
    CirculantSample s3{3, {0.5, 2.0, -0.7}, 1.0};
    CHECK(trace_power_combinatorial(s3, 2).value ==
          doctest::Approx(0.25 + 2.0 * 2.0 * (-0.7)).epsilon(1e-14));
    CHECK(trace_power_spectral(s3, 2).value ==
          doctest::Approx(0.25 + 2.0 * 2.0 * (-0.7)).epsilon(1e-12));
}

TEST_CASE("spectral, combinatorial and dense-matrix routes agree") {
    std::uint64_t seed = 1000;
    for (std::size_t n : {4u, 5u, 8u, 16u, 33u, 64u}) {
        for (int p = 1; p <= 5; ++p) {
            const auto s = random_sample(n, seed++);
            const double spec = trace_power_spectral(s, p).value;
            const double comb = trace_power_combinatorial(s, p).value;
            CHECK(std::abs(spec - comb) <= 1e-8 * (1.0 + std::abs(comb)));
            if (n <= 8 && p <= 4) {
                const double dense =
                    oracles::dense_trace_power(oracles::dense_circulant(s.entries), p);
                CHECK(spec == doctest::Approx(dense).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("power-of-two entry scaling is exact in both routes") {
    const auto s = random_sample(12, 77);
    auto scaled = s;
    for (auto& v : scaled.entries) v *= 4.0;
    for (int p : {2, 3, 4}) {
        const double factor = std::pow(4.0, p);
        CHECK(trace_power_combinatorial(scaled, p).value ==
              factor * trace_power_combinatorial(s, p).value);
        CHECK(trace_power_spectral(scaled, p).value ==
              factor * trace_power_spectral(s, p).value);
    }
    // general scalings hold to rounding
    auto odd = s;
    for (auto& v : odd.entries) v *= 1.7;
    CHECK(trace_power_spectral(odd, 3).value ==
          doctest::Approx(std::pow(1.7, 3) * trace_power_spectral(s, 3).value).epsilon(1e-12));
}

TEST_CASE("combinatorial route respects the enumeration budget") {
    const auto s = random_sample(64, 8);
    CHECK_THROWS_AS(trace_power_combinatorial(s, 5, 1e5), budget_error);
}

TEST_CASE("expected trace power: exact values and an independent mc check") {
    CHECK(expected_trace_power_exact(17, 3, 1.0) == 0.0);  // odd p
    CHECK(expected_trace_power_exact(9, 5, 0.3) == 0.0);
    CHECK(expected_trace_power_exact(3, 2, 0.7) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(expected_trace_power_exact(4, 2, 0.7) == doctest::Approx(1.4).epsilon(1e-14));

    // n=5, p=4: exact enumeration vs dense-matrix monte carlo
    const double exact = expected_trace_power_exact(5, 4, 1.0);
    std::mt19937_64 gen(4242);
    std::normal_distribution<double> nd(0.0, 1.0);
    const std::size_t R = 20000;
    double mean = 0, m2 = 0;
    for (std::size_t r = 0; r < R; ++r) {
        std::vector<double> b(5);
        for (auto& v : b) v = nd(gen);
        const double tr = oracles::dense_trace_power(oracles::dense_circulant(b), 4);
        mean += tr;
        m2 += tr * tr;
    }
    mean /= static_cast<double>(R);
    const double sd = std::sqrt(m2 / static_cast<double>(R) - mean * mean);
    CHECK(std::abs(mean - exact) < 4.0 * sd / std::sqrt(static_cast<double>(R)));
}

TEST_CASE("fluctuation series: variance against the exact finite-n value") {
    TimeGrid g({0.0, 0.5, 1.0});
    const std::size_t R = 20000;
    const auto e = generate_ensemble(15, g, R, 314159);
    for (int p : {2, 3}) {
        const auto w = fluctuation_series(e, p, {1.0});
        double var = 0;
        for (std::size_t r = 0; r < R; ++r) var += w.value(0, r) * w.value(0, r);
        var /= static_cast<double>(R - 1);
        const double expect = oracles::exact_wp_variance(15, p, 1.0);
        // se of a variance estimate, inflated for the heavy chaos tails
        const double se = expect * std::sqrt(2.0 / static_cast<double>(R)) * 2.0;
        CHECK(std::abs(var - expect) < 4.0 * se);
    }

    // two-time covariance of w_2 is exactly 2 min(s,t)^2 at finite n
    const auto w2 = fluctuation_series(e, 2, {0.5, 1.0});
    double cov = 0, mean_a = 0, mean_b = 0;
    for (std::size_t r = 0; r < R; ++r) {
        mean_a += w2.value(0, r);
        mean_b += w2.value(1, r);
    }
    mean_a /= static_cast<double>(R);
    mean_b /= static_cast<double>(R);
    for (std::size_t r = 0; r < R; ++r)
        cov += (w2.value(0, r) - mean_a) * (w2.value(1, r) - mean_b);
    cov /= static_cast<double>(R - 1);
    CHECK(std::abs(cov - oracles::exact_w2_covariance(0.5, 1.0)) < 0.05);
}

TEST_CASE("centering modes") {
    TimeGrid g({0.0, 1.0});
    const std::size_t R = 10000;
    const auto e = generate_ensemble(9, g, R, 2718);

    const auto exact = fluctuation_series(e, 2, {1.0}, Centering::exact);
    const auto empirical = fluctuation_series(e, 2, {1.0}, Centering::empirical);

    // empirical centering forces a zero replica mean
    double mean = 0;
    for (std::size_t r = 0; r < R; ++r) mean += empirical.value(0, r);
    mean /= static_cast<double>(R);
    CHECK(std::abs(mean) < 1e-12);

    // the two centerings differ by a common O(R^{-1/2}) shift per value
    const double shift = exact.value(0, 0) - empirical.value(0, 0);
    for (std::size_t r = 1; r < 50; ++r)
        CHECK(exact.value(0, r) - empirical.value(0, r) ==
              doctest::Approx(shift).epsilon(1e-9));
    const double sd_trace = std::sqrt(2.0 * 9.0);  // sd of Tr C^2 at t=1
    CHECK(std::abs(shift) <
          5.0 * sd_trace / std::sqrt(static_cast<double>(R) * 9.0));

    // odd p: exact centering value is exactly 0
    const auto w3 = fluctuation_series(e, 3, {1.0}, Centering::exact);
    CHECK(w3.centering_values[0] == 0.0);
}

TEST_CASE("degenerate powers") {
    TimeGrid g({0.0, 1.0});
    const auto e = generate_ensemble(6, g, 8, 55);
    CHECK_THROWS_AS(fluctuation_series(e, 1, {1.0}), std::domain_error);
    CHECK_THROWS_AS(fluctuation_series(e, 0, {1.0}), std::domain_error);

    const auto w0 = fluctuation_series(e, 0, {1.0}, Centering::exact, TraceRoute::spectral,
                                       kDefaultEnumerationBudget, true);
    const auto w1 = fluctuation_series(e, 1, {1.0}, Centering::exact, TraceRoute::spectral,
                                       kDefaultEnumerationBudget, true);
    for (std::size_t r = 0; r < 8; ++r) {
        CHECK(w0.value(0, r) == 0.0);
        CHECK(w1.value(0, r) == e.value(r, 0, 1));
    }
}
