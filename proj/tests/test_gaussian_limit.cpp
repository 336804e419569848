#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "circlt/kernel.hpp"
#include "circlt/rng.hpp"

using namespace circlt;

TEST_CASE("kernel values") {
    CHECK(kernel_value(2, 2, 1.0, 1.0) == doctest::Approx(2.0));
    CHECK(kernel_value(2, 3, 0.7, 1.3) == 0.0);
    CHECK(kernel_value(3, 3, 0.5, 2.0) == doctest::Approx(0.75));  // 3! * 0.5^3
    CHECK(kernel_value(3, 3, 2.0, 0.5) == doctest::Approx(0.75));  // symmetric in times
    CHECK(kernel_value(2, 2, 0.0, 1.0) == 0.0);

    // display convention rescales by (p-1)!
    CHECK(kernel_value(3, 3, 1.0, 1.0, Convention::display) == doctest::Approx(12.0));
    CHECK(kernel_value(2, 2, 1.0, 1.0, Convention::display) == doctest::Approx(2.0));

    CHECK_THROWS_AS(kernel_value(1, 2, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(kernel_value(2, 0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(kernel_value(2, 2, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("kernel scaling homogeneity") {
    const CounterRng rng(6);
    for (int p : {2, 3, 4}) {
        for (int trial = 0; trial < 20; ++trial) {
            const double t1 = rng.uniform01(trial * 4) * 3.0;
            const double t2 = rng.uniform01(trial * 4 + 1) * 3.0;
            const double c = 0.2 + rng.uniform01(trial * 4 + 2) * 2.0;
            const double lhs = kernel_value(p, p, c * t1, c * t2);
            const double rhs = std::pow(c, p) * kernel_value(p, p, t1, t2);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("kernel matrix: gram structure and factorization") {
    const auto single = kernel_matrix({{2, 0.7}});
    CHECK(single.psd);
    CHECK(single.rank == 1);
    CHECK(single.gram_at(0, 0) == doctest::Approx(2.0 * 0.49));

    const auto km = kernel_matrix({{2, 0.25}, {2, 0.5}, {2, 1.0}});
    CHECK(km.psd);
    CHECK(km.jitter_used == 0.0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const double want =
                2.0 * std::pow(std::min(km.labels[i].t, km.labels[j].t), 2);
            CHECK(km.gram_at(i, j) == doctest::Approx(want));
        }

    // factor reconstructs the permuted gram matrix
    const std::size_t d = km.dim();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double acc = 0;
            for (std::size_t k = 0; k < km.rank; ++k)
                acc += km.factor[i * d + k] * km.factor[j * d + k];
            CHECK(acc ==
                  doctest::Approx(km.gram_at(km.pivot[i], km.pivot[j])).epsilon(1e-10));
        }

    // mixed p: block diagonal
    const auto mixed = kernel_matrix({{2, 0.5}, {3, 0.5}, {2, 1.0}, {3, 1.0}});
    CHECK(mixed.psd);
    CHECK(mixed.gram_at(0, 1) == 0.0);
    CHECK(mixed.gram_at(0, 3) == 0.0);
    CHECK(mixed.gram_at(2, 1) == 0.0);
    CHECK(mixed.gram_at(0, 2) != 0.0);
    CHECK(mixed.gram_at(1, 3) != 0.0);
}

TEST_CASE("kernel matrix handles exact rank deficiency") {
    // duplicate labels and a t=0 label give a singular but psd gram
    const auto km = kernel_matrix({{2, 1.0}, {2, 1.0}, {2, 0.0}});
    CHECK(km.psd);
    CHECK(km.rank == 1);
    const auto s = sample_limit_process(km, 500, 3);
    for (std::size_t r = 0; r < 500; ++r) {
        // duplicates move together (up to factor rounding: 2/sqrt(2) vs sqrt(2))
        CHECK(s.column(0)[r] == doctest::Approx(s.column(1)[r]).epsilon(1e-14));
        CHECK(s.column(2)[r] == 0.0);  // t = 0 is identically zero
    }
}

TEST_CASE("limit process sampling reproduces the kernel") {
    const auto km = kernel_matrix({{2, 1.0}, {3, 1.0}});
    const std::size_t R = 100000;
    const auto s = sample_limit_process(km, R, 20260101);

    double v2 = 0, v3 = 0, cross = 0;
    for (std::size_t r = 0; r < R; ++r) {
        v2 += s.column(0)[r] * s.column(0)[r];
        v3 += s.column(1)[r] * s.column(1)[r];
        cross += s.column(0)[r] * s.column(1)[r];
    }
    v2 /= static_cast<double>(R);
    v3 /= static_cast<double>(R);
    cross /= static_cast<double>(R);

    const double se2 = 2.0 * std::sqrt(2.0 / static_cast<double>(R));
    const double se3 = 6.0 * std::sqrt(2.0 / static_cast<double>(R));
    const double se_cross = std::sqrt(2.0 * 6.0 / static_cast<double>(R));
    CHECK(std::abs(v2 - 2.0) < 4.0 * se2);
    CHECK(std::abs(v3 - 6.0) < 4.0 * se3);
    CHECK(std::abs(cross) < 4.0 * se_cross);

    // deterministic given the seed
    const auto again = sample_limit_process(km, 100, 20260101);
    for (std::size_t r = 0; r < 100; ++r) CHECK(again.column(0)[r] == s.column(0)[r]);
}

TEST_CASE("sampling refuses a failed factorization") {
    KernelMatrix bad;
    bad.labels = {{2, 1.0}};
    bad.gram = {2.0};
    bad.psd = false;
    CHECK_THROWS_AS(sample_limit_process(bad, 10, 1), std::runtime_error);
}
