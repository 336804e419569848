#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "circlt/fft.hpp"
#include "circlt/rng.hpp"
#include "oracles.hpp"

using namespace circlt;

TEST_CASE("transform matches the naive dft for assorted lengths") {
    const CounterRng rng(123);
    std::uint64_t ctr = 0;
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 9u, 12u, 16u, 17u, 24u,
                          31u, 32u, 33u, 100u, 101u, 128u, 201u, 256u}) {
        std::vector<double> x(n);
        for (auto& v : x) v = rng.normal(ctr++);
        const Dft plan(n);
        const auto fast = plan.transform(x);
        const auto slow = oracles::naive_dft(x);
        double scale = 0;
        for (const auto& z : slow) scale = std::max(scale, std::abs(z));
        for (std::size_t k = 0; k < n; ++k)
            CHECK(std::abs(fast[k] - slow[k]) <= 1e-10 * (1.0 + scale));
    }
}

TEST_CASE("unit impulse transforms to unit magnitudes") {
    const std::size_t n = 20;
    std::vector<double> x(n, 0.0);
    x[3] = 1.0;
    const auto out = Dft(n).transform(x);
    for (std::size_t k = 0; k < n; ++k) {
        CHECK(std::abs(out[k]) == doctest::Approx(1.0).epsilon(1e-12));
        const double want = 2.0 * M_PI * static_cast<double>(3 * k % n) / static_cast<double>(n);
        const std::complex<double> expect = std::polar(1.0, want);
        CHECK(std::abs(out[k] - expect) < 1e-12);
    }
}

TEST_CASE("energy identity") {
    const CounterRng rng(5);
    for (std::size_t n : {13u, 64u, 90u}) {
        std::vector<double> x(n);
        double e_in = 0;
        for (std::size_t j = 0; j < n; ++j) {
            x[j] = rng.normal(n * 1000 + j);
            e_in += x[j] * x[j];
        }
        const auto out = Dft(n).transform(x);
        double e_out = 0;
        for (const auto& z : out) e_out += std::norm(z);
        CHECK(e_out == doctest::Approx(static_cast<double>(n) * e_in).epsilon(1e-12));
    }
}
