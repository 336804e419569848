// Test-only oracles, deliberately independent of the library's computation
// paths: a naive DFT, dense matrix powers for traces, closed-form finite-n
// moments of w_p derived from the independent Gaussian DFT components, and
// a plain std::mt19937-based Brownian simulator.
#pragma once

#include <complex>
#include <random>
#include <vector>

namespace oracles {

inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0, 0);
        for (std::size_t j = 0; j < n; ++j)
            acc += x[j] * std::polar(1.0, 2.0 * M_PI * static_cast<double>(j * k) /
                                              static_cast<double>(n));
        out[k] = acc;
    }
    return out;
}

/// Dense circulant from first-row entries, scaled by 1/sqrt(n).
inline std::vector<std::vector<double>> dense_circulant(const std::vector<double>& entries) {
    const std::size_t n = entries.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = entries[(j + n - i) % n] / std::sqrt(static_cast<double>(n));
    return m;
}

/// Tr(M^p) by repeated dense multiplication.
inline double dense_trace_power(const std::vector<std::vector<double>>& m, int p) {
    const std::size_t n = m.size();
    if (p == 0) return static_cast<double>(n);
    auto acc = m;
    for (int q = 1; q < p; ++q) {
        std::vector<std::vector<double>> next(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t j = 0; j < n; ++j) next[i][j] += acc[i][k] * m[k][j];
        acc = std::move(next);
    }
    double tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += acc[i][i];
    return tr;
}

inline double dfact_odd(int k) {  // (2k-1)!!
    double r = 1;
    for (int m = 2 * k - 1; m > 1; m -= 2) r *= m;
    return r;
}

inline double factorial(int p) {
    double r = 1;
    for (int i = 2; i <= p; ++i) r *= i;
    return r;
}

/// Exact Var(w_p(t)) at finite n. The DFT of the iid N(0,t) entry vector
/// splits Tr C^p into independent pieces: the real mode(s) lambda_0 (and
/// lambda_{n/2} for even n) ~ N(0,t), plus (per conjugate pair) 2 Re z^p
/// with z isotropic complex Gaussian, E|z|^2 = t. Var(2 Re z^p) = 2 p! t^p
/// and Var(lambda^p) = t^p ((2p-1)!! - ((p-1)!!)^2 [p even]).
inline double exact_wp_variance(std::size_t n, int p, double t) {
    const double tp = std::pow(t, p);
    double real_mode = tp * dfact_odd(p);  // E lambda^{2p} = (2p-1)!! t^p
    if (p % 2 == 0) {
        const double mean = dfact_odd(p / 2) * std::pow(t, p / 2.0);
        real_mode -= mean * mean;
    }
    const std::size_t real_modes = (n % 2 == 0) ? 2 : 1;
    const std::size_t pairs = (n - real_modes) / 2;
    const double var_trace = static_cast<double>(real_modes) * real_mode +
                             static_cast<double>(pairs) * 2.0 * factorial(p) * tp;
    return var_trace / static_cast<double>(n);
}

/// Exact Cov(w_2(s), w_2(t)) at finite n (= 2 min(s,t)^2 for every n).
inline double exact_w2_covariance(double s, double t) {
    const double m = std::min(s, t);
    return 2.0 * m * m;
}

/// Independent Brownian path simulation with the standard library RNG.
struct PlainBrownian {
    std::mt19937_64 gen;
    explicit PlainBrownian(std::uint64_t seed) : gen(seed) {}

    // one path over the grid, independent draws
    std::vector<double> path(const std::vector<double>& grid) {
        std::normal_distribution<double> nd(0.0, 1.0);
        std::vector<double> b(grid.size(), 0.0);
        for (std::size_t k = 1; k < grid.size(); ++k)
            b[k] = b[k - 1] + std::sqrt(grid[k] - grid[k - 1]) * nd(gen);
        return b;
    }
};

}  // namespace oracles
