#include "circlt/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "circlt/rng.hpp"

namespace circlt {

double kernel_value(int p, int q, double t1, double t2, Convention convention) {
    if (p < 2 || q < 2)
        throw std::domain_error(
            "kernel_value: p and q must be >= 2 (w_0 is identically zero and w_1 is a single "
            "Brownian path; neither has a limit kernel)");
    if (t1 < 0 || t2 < 0) throw std::invalid_argument("kernel_value: times must be >= 0");
    if (p != q) return 0.0;
    // sum_s f_p(s) is exactly 1 in the normalized convention and (p-1)! in
    // the display convention; evaluated exactly either way
    Rational sum(0);
    for (int s = 0; s <= p - 1; ++s) sum = sum + eulerian_density_exact(p, s, convention);
    return static_cast<double>(factorial(p)) * sum.to_double() *
           std::pow(std::min(t1, t2), p);
}

namespace {

// Pivoted outer-product Cholesky on the permuted Gram matrix:
// G[perm[i]][perm[j]] = sum_k L[i][k] L[j][k]. Returns false (with the
// offending pivot in min_pivot) when a pivot is negative beyond tolerance.
bool pivoted_cholesky(const std::vector<double>& gram, std::size_t d, double jitter,
                      std::vector<double>& L, std::vector<std::size_t>& perm,
                      std::size_t& rank, double& min_pivot) {
    std::vector<double> diag(d);
    for (std::size_t i = 0; i < d; ++i) diag[i] = gram[i * d + i] + jitter;
    double max_diag0 = 0;
    for (std::size_t i = 0; i < d; ++i) max_diag0 = std::max(max_diag0, std::abs(diag[i]));
    const double tol = 1e-12 * std::max(max_diag0, 1e-300) * static_cast<double>(d);

    perm.resize(d);
    for (std::size_t i = 0; i < d; ++i) perm[i] = i;
    L.assign(d * d, 0.0);
    min_pivot = 0.0;
    rank = 0;

    for (std::size_t k = 0; k < d; ++k) {
        std::size_t best = k;
        for (std::size_t j = k + 1; j < d; ++j)
            if (diag[perm[j]] > diag[perm[best]]) best = j;
        if (best != k) {
            std::swap(perm[k], perm[best]);
            // the partially built rows travel with their pivot positions
            for (std::size_t m = 0; m < k; ++m) std::swap(L[k * d + m], L[best * d + m]);
        }
        const double pivot = diag[perm[k]];
        min_pivot = std::min(min_pivot, pivot);
        if (pivot <= tol) {
            // remaining mass should be numerically zero; anything clearly
            // negative means the matrix is indefinite
            for (std::size_t j = k; j < d; ++j)
                if (diag[perm[j]] < -tol) { min_pivot = diag[perm[j]]; return false; }
            rank = k;
            return true;
        }
        const double root = std::sqrt(pivot);
        L[k * d + k] = root;
        for (std::size_t i = k + 1; i < d; ++i) {
            double v = gram[perm[i] * d + perm[k]] + (perm[i] == perm[k] ? jitter : 0.0);
            for (std::size_t m = 0; m < k; ++m) v -= L[i * d + m] * L[k * d + m];
            L[i * d + k] = v / root;
            diag[perm[i]] -= L[i * d + k] * L[i * d + k];
        }
        rank = k + 1;
    }
    return true;
}

}  // namespace

KernelMatrix kernel_matrix(const std::vector<Label>& labels, Convention convention) {
    if (labels.empty()) throw std::invalid_argument("kernel_matrix: no labels");
    KernelMatrix out;
    out.labels = labels;
    const std::size_t d = labels.size();
    out.gram.resize(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            out.gram[i * d + j] =
                kernel_value(labels[i].p, labels[j].p, labels[i].t, labels[j].t, convention);

    double trace = 0;
    for (std::size_t i = 0; i < d; ++i) trace += out.gram[i * d + i];

    out.jitter_used = 0.0;
    out.psd = pivoted_cholesky(out.gram, d, 0.0, out.factor, out.pivot, out.rank, out.min_pivot);
    if (!out.psd) {
        const double jitter = 1e-12 * trace / static_cast<double>(d);
        out.jitter_used = jitter;
        out.psd =
            pivoted_cholesky(out.gram, d, jitter, out.factor, out.pivot, out.rank, out.min_pivot);
    }
    return out;
}

LimitSample sample_limit_process(const KernelMatrix& kernel, std::size_t replicas,
                                 std::uint64_t seed) {
    if (!kernel.psd)
        throw std::runtime_error(
            "sample_limit_process: kernel matrix failed the positive-semidefiniteness check "
            "(min pivot " + std::to_string(kernel.min_pivot) + ")");
    if (replicas < 1) throw std::invalid_argument("sample_limit_process: replicas must be >= 1");

    const std::size_t d = kernel.dim();
    LimitSample out;
    out.labels = kernel.labels;
    out.replicas = replicas;
    out.seed = seed;
    out.values.resize(d * replicas);

    const std::uint64_t stream_seed = mix64(seed ^ rng_tag::limit_process);
    std::vector<double> z(kernel.rank);
    for (std::size_t r = 0; r < replicas; ++r) {
        const CounterRng rng = CounterRng::stream(stream_seed, r, 0);
        for (std::size_t k = 0; k < kernel.rank; ++k) z[k] = rng.normal(k);
        for (std::size_t i = 0; i < d; ++i) {
            double x = 0;
            for (std::size_t k = 0; k < std::min(kernel.rank, i + 1); ++k)
                x += kernel.factor[i * d + k] * z[k];
            out.values[kernel.pivot[i] * replicas + r] = x;
        }
    }
    return out;
}

}  // namespace circlt
