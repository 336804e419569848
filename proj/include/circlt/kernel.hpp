#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "circlt/combinatorics.hpp"

namespace circlt {

/// A label (p, t) of the limit family N_p(t).
struct Label {
    int p = 0;
    double t = 0;
};

/// Limit covariance K((p,t1),(q,t2)) = 0 for p != q, else
/// (min(t1,t2))^p * p! * sum_s f_p(s). Under the normalized density
/// convention the sum is exactly 1 and this is p! * min^p; the display
/// convention multiplies everything by (p-1)!. p, q >= 2 (w_0 has no
/// fluctuation and w_1 is a single Brownian path, so no limit kernel).
double kernel_value(int p, int q, double t1, double t2,
                    Convention convention = Convention::normalized);

/// Gram matrix of kernel_value over a label set plus a positive
/// semidefiniteness certificate from a pivoted Cholesky factorization.
/// A diagonal jitter of at most 1e-12 * trace/dim is tried before
/// declaring failure; an indefinite matrix reports the offending pivot.
struct KernelMatrix {
    std::vector<Label> labels;
    std::vector<double> gram;        // dim x dim, row-major
    bool psd = false;
    std::size_t rank = 0;
    std::vector<double> factor;      // dim x rank, row-major: P G P^T = L L^T
    std::vector<std::size_t> pivot;  // pivot order (original index per step)
    double min_pivot = 0;            // most negative pivot seen (eigen-estimate)
    double jitter_used = 0;

    std::size_t dim() const { return labels.size(); }
    double gram_at(std::size_t i, std::size_t j) const { return gram[i * dim() + j]; }
};

KernelMatrix kernel_matrix(const std::vector<Label>& labels,
                           Convention convention = Convention::normalized);

/// Exact multivariate normal draws with the Gram covariance, through the
/// pivoted factor. Deterministic given the seed; replicas use derived
/// counter substreams so generation order is irrelevant.
struct LimitSample {
    std::vector<Label> labels;
    std::size_t replicas = 0;
    std::uint64_t seed = 0;
    std::vector<double> values;  // (label, replica), row-major

    const double* column(std::size_t label_index) const { return values.data() + label_index * replicas; }
};

LimitSample sample_limit_process(const KernelMatrix& kernel, std::size_t replicas,
                                 std::uint64_t seed);

}  // namespace circlt
