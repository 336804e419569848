#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "circlt/brownian.hpp"

namespace circlt {

inline constexpr double kDefaultEnumerationBudget = 1e8;

/// First-row entries (b_0, ..., b_{n-1}) of the time-t circulant sample.
/// The represented matrix has (i,j) element entries[(j-i) mod n] / sqrt(n);
/// the 1/sqrt(n) scaling is applied at trace time, never stored.
struct CirculantSample {
    std::size_t n = 0;
    std::vector<double> entries;
    double t = 0;

    /// Dense matrix element (for inspection; traces never build the matrix).
    double matrix_element(std::size_t i, std::size_t j) const;
};

enum class TraceRoute { spectral, combinatorial };

struct TracePower {
    std::size_t n = 0;
    int p = 0;
    double value = 0;
    TraceRoute route = TraceRoute::spectral;
};

enum class Centering { exact, empirical };

/// Per-replica values of w_p(t) = n^{-1/2} (Tr C^p(t) - c(t)) over a set
/// of grid times, plus the centering values c(t) actually used.
struct FluctuationSeries {
    int p = 0;
    std::vector<double> times;
    std::size_t replicas = 0;
    std::vector<double> values;  // (time, replica), row-major
    Centering centering = Centering::exact;
    std::vector<double> centering_values;
    TraceRoute route = TraceRoute::spectral;
    // ensemble identity, for replica pairing checks
    std::size_t n = 0;
    std::uint64_t seed = 0;

    double value(std::size_t time_index, std::size_t replica) const {
        return values[time_index * replicas + replica];
    }
    const double* column(std::size_t time_index) const { return values.data() + time_index * replicas; }
    std::size_t time_index(double t) const;

    bool paired_with(const FluctuationSeries& other) const {
        return n == other.n && replicas == other.replicas && seed == other.seed;
    }
};

/// Entries of one replica's circulant at grid time t.
CirculantSample sample_at(const PathEnsemble& ensemble, std::size_t replica, double t);

/// Eigenvalues lambda_k = n^{-1/2} sum_j entries[j] exp(2 pi i j k / n).
std::vector<std::complex<double>> circulant_eigenvalues(const CirculantSample& sample);

/// Tr C^p as sum of eigenvalue powers (powers by repeated complex
/// multiplication; no matrix is ever formed). The accumulated imaginary
/// part is checked against 1e-9 * sum_k |lambda_k|^p and discarded.
TracePower trace_power_spectral(const CirculantSample& sample, int p);

/// Tr C^p = n^{1-p/2} * sum over A_p of b_{i_1} ... b_{i_p}, enumerating
/// the free coordinates (i_1..i_{p-1}) and solving i_p mod n. Cost is
/// n^{p-1}; guarded by the iteration budget (throws budget_error).
TracePower trace_power_combinatorial(const CirculantSample& sample, int p,
                                     double budget = kDefaultEnumerationBudget);

/// E[Tr C_n(t)^p] evaluated exactly: a Gaussian product moment is zero
/// unless every distinct index has even multiplicity 2k, in which case it
/// contributes t^{p/2} * prod (2k-1)!!. Odd p is exactly 0.
double expected_trace_power_exact(std::size_t n, int p, double t,
                                  double budget = kDefaultEnumerationBudget);

/// Build w_p over the requested grid times. Exact centering uses
/// expected_trace_power_exact; empirical centering subtracts the
/// across-replica mean, making the replica-mean exactly 0 by construction.
/// p < 2 is rejected unless allow_degenerate, in which case the exact
/// identities w_0 = 0 and w_1 = b_0(t) are returned.
FluctuationSeries fluctuation_series(const PathEnsemble& ensemble, int p,
                                     const std::vector<double>& times,
                                     Centering centering = Centering::exact,
                                     TraceRoute route = TraceRoute::spectral,
                                     double budget = kDefaultEnumerationBudget,
                                     bool allow_degenerate = false,
                                     int threads = 1);

}  // namespace circlt
