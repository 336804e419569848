#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "circlt/brownian.hpp"
#include "circlt/errors.hpp"
#include "oracles.hpp"

using namespace circlt;

TEST_CASE("time grid validation") {
    CHECK_THROWS_AS(TimeGrid({}), grid_error);
    CHECK_THROWS_AS(TimeGrid({0.5, 1.0}), grid_error);          // must start at 0
    CHECK_THROWS_AS(TimeGrid({0.0, 1.0, 1.0}), grid_error);     // strictly increasing
    CHECK_THROWS_AS(TimeGrid({0.0, 2.0, 1.0}), grid_error);
    CHECK_THROWS_AS(TimeGrid({0.0, INFINITY}), grid_error);
    TimeGrid g({0.0, 0.5, 1.0});
    CHECK(g.index_of(0.5) == 1);
    CHECK_THROWS_AS(g.index_of(0.25), grid_error);
}

TEST_CASE("single point ensemble is exactly zero") {
    const auto e = generate_ensemble(1, TimeGrid({0.0}), 1, 42);
    CHECK(e.value(0, 0, 0) == 0.0);
}

TEST_CASE("generation is deterministic and thread-count independent") {
    TimeGrid g({0.0, 0.3, 1.0, 2.5});
    const auto a = generate_ensemble(5, g, 40, 987654321);
    const auto b = generate_ensemble(5, g, 40, 987654321);
    CHECK(a.raw() == b.raw());
    const auto c = generate_ensemble(5, g, 40, 987654321, 3);
    CHECK(a.raw() == c.raw());
    const auto d = generate_ensemble(5, g, 40, 987654322);
    CHECK(a.raw() != d.raw());
}

TEST_CASE("values depend only on (seed, replica, entry): prefix stability") {
    TimeGrid g({0.0, 1.0});
    const auto small = generate_ensemble(4, g, 10, 777);
    const auto more_replicas = generate_ensemble(4, g, 50, 777);
    for (std::size_t r = 0; r < 10; ++r)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(small.value(r, i, 1) == more_replicas.value(r, i, 1));
    const auto more_entries = generate_ensemble(8, g, 10, 777);
    for (std::size_t r = 0; r < 10; ++r)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(small.value(r, i, 1) == more_entries.value(r, i, 1));
}

TEST_CASE("marginal variance and covariance match the Brownian law") {
    TimeGrid g({0.0, 0.5, 1.0});
    const std::size_t R = 100000;
    const auto e = generate_ensemble(4, g, R, 7);

    for (std::size_t i = 0; i < 4; ++i) {
        double s2 = 0;
        for (std::size_t r = 0; r < R; ++r) {
            const double x = e.value(r, i, 2);
            s2 += x * x;
        }
        s2 /= static_cast<double>(R);
        // Var b(1) = 1, se of the estimate ~ sqrt(2/R)
        CHECK(std::abs(s2 - 1.0) < 3.0 * std::sqrt(2.0 / static_cast<double>(R)));
    }

    // Cov(b(0.5), b(1)) = 0.5 within 3 se, and an independent simulation
    // with the standard library generator lands in the same band
    double cov = 0;
    for (std::size_t r = 0; r < R; ++r) cov += e.value(r, 0, 1) * e.value(r, 0, 2);
    cov /= static_cast<double>(R);
    const double se = std::sqrt((0.5 * 1.0 + 0.25) / static_cast<double>(R));
    CHECK(std::abs(cov - 0.5) < 3.0 * se);

    oracles::PlainBrownian plain(7);
    double cov_plain = 0;
    for (std::size_t r = 0; r < R; ++r) {
        const auto b = plain.path({0.0, 0.5, 1.0});
        cov_plain += b[1] * b[2];
    }
    cov_plain /= static_cast<double>(R);
    CHECK(std::abs(cov_plain - 0.5) < 3.0 * se);
}

TEST_CASE("increment variance matches dt within 4 se") {
    TimeGrid g({0.0, 0.2, 1.0, 1.3});
    const std::size_t R = 20000;
    const auto e = generate_ensemble(3, g, R, 99);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 1; k < g.size(); ++k) {
            const double dt = g[k] - g[k - 1];
            double s2 = 0;
            for (std::size_t r = 0; r < R; ++r) {
                const double d = e.value(r, i, k) - e.value(r, i, k - 1);
                s2 += d * d;
            }
            s2 /= static_cast<double>(R);
            CHECK(std::abs(s2 - dt) < 4.0 * dt * std::sqrt(2.0 / static_cast<double>(R)));
        }
    }
}

TEST_CASE("increment_decompose splits paths exactly") {
    TimeGrid g({0.0, 1.0, 2.0});
    const auto e = generate_ensemble(6, g, 20, 5);

    const auto pair = increment_decompose(e, 3, 1.0, 2.0);
    CHECK(pair.u.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(pair.u[i] == e.value(3, i, 1));
        CHECK(pair.u[i] + pair.v[i] == doctest::Approx(e.value(3, i, 2)).epsilon(1e-15));
    }

    const auto same = increment_decompose(e, 0, 1.0, 1.0);
    for (double v : same.v) CHECK(v == 0.0);

    CHECK_THROWS_AS(increment_decompose(e, 0, 0.7, 1.0), grid_error);
    CHECK_THROWS_AS(increment_decompose(e, 0, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(increment_decompose(e, 99, 1.0, 2.0), std::out_of_range);
}

TEST_CASE("u and v are uncorrelated across replicas") {
    TimeGrid g({0.0, 1.0, 2.0});
    const std::size_t R = 100000;
    const auto e = generate_ensemble(1, g, R, 31);
    double suv = 0, su2 = 0, sv2 = 0;
    for (std::size_t r = 0; r < R; ++r) {
        const double u = e.value(r, 0, 1);
        const double v = e.value(r, 0, 2) - u;
        suv += u * v;
        su2 += u * u;
        sv2 += v * v;
    }
    const double corr = suv / std::sqrt(su2 * sv2);
    CHECK(std::abs(corr) < 3.0 / std::sqrt(static_cast<double>(R)));
}

TEST_CASE("ensemble csv round trip") {
    TimeGrid g({0.0, 0.25, 1.0});
    const auto e = generate_ensemble(3, g, 5, 2024);
    const auto path = std::filesystem::temp_directory_path() / "circlt_test_ensemble.csv";
    save_ensemble_csv(e, path.string());
    const auto back = load_ensemble_csv(path.string());
    CHECK(back.n_entries() == 3);
    CHECK(back.replicas() == 5);
    CHECK(back.seed() == 2024);
    CHECK(back.raw() == e.raw());
    std::filesystem::remove(path);
}
