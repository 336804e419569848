#include "circlt/circulant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "circlt/errors.hpp"
#include "circlt/fft.hpp"

namespace circlt {

double CirculantSample::matrix_element(std::size_t i, std::size_t j) const {
    const std::size_t idx = (j + n - i % n) % n;
    return entries[idx] / std::sqrt(static_cast<double>(n));
}

std::size_t FluctuationSeries::time_index(double t) const {
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] == t) return k;
    throw grid_error("fluctuation series has no column for time " + std::to_string(t));
}

CirculantSample sample_at(const PathEnsemble& ensemble, std::size_t replica, double t) {
    if (replica >= ensemble.replicas())
        throw std::out_of_range("sample_at: replica out of range");
    const std::size_t k = ensemble.grid().index_of(t);
    CirculantSample s;
    s.n = ensemble.n_entries();
    s.t = t;
    s.entries.resize(s.n);
    for (std::size_t i = 0; i < s.n; ++i) s.entries[i] = ensemble.value(replica, i, k);
    return s;
}

std::vector<std::complex<double>> circulant_eigenvalues(const CirculantSample& sample) {
    Dft plan(sample.n);
    auto eig = plan.transform(sample.entries);
    const double scale = 1.0 / std::sqrt(static_cast<double>(sample.n));
    for (auto& z : eig) z *= scale;
    return eig;
}

namespace {

double check_budget(std::size_t n, int p, double budget, const char* who) {
    const double iters = std::pow(static_cast<double>(n), p - 1);
    if (iters > budget)
        throw budget_error(std::string(who) + ": enumeration needs " + std::to_string(iters) +
                               " iterations, over the budget of " + std::to_string(budget) +
                               " (raise the budget or use the spectral route)",
                           iters, budget);
    return iters;
}

// spectral trace from precomputed eigenvalues; the imaginary residue of
// the power sum is bounded by tol * sum |lambda|^p and then dropped
double trace_from_eigenvalues(const std::vector<std::complex<double>>& eig, int p) {
    if (p == 0) return static_cast<double>(eig.size());
    std::complex<double> acc(0.0, 0.0);
    double mag = 0.0;
    for (const auto& lam : eig) {
        std::complex<double> pw = lam;
        for (int q = 1; q < p; ++q) pw *= lam;
        acc += pw;
        mag += std::pow(std::abs(lam), p);
    }
    if (std::abs(acc.imag()) > 1e-9 * mag)
        throw std::runtime_error("spectral trace: imaginary residue above tolerance");
    return acc.real();
}

// sum over A_p of prod entries[i_j]: free coordinates i_1..i_{p-1}, the
// last coordinate solved mod n. Lexicographic odometer with prefix
// products, so the per-leaf work is O(1) amortized.
double a_p_product_sum(const std::vector<double>& entries, std::size_t n, int p) {
    if (p == 1) return entries[0];
    const int free = p - 1;
    std::vector<std::size_t> idx(free, 0);
    std::vector<double> prod(free + 1);     // prod[d] = product over idx[0..d-1]
    std::vector<std::size_t> sum(free + 1); // sum[d] = sum over idx[0..d-1], reduced mod n
    prod[0] = 1.0;
    sum[0] = 0;
    for (int d = 0; d < free; ++d) {
        prod[d + 1] = prod[d] * entries[0];
        sum[d + 1] = sum[d];
    }
    double total = 0.0;
    while (true) {
        const std::size_t last = (n - sum[free]) % n;
        total += prod[free] * entries[last];
        int d = free - 1;
        while (d >= 0 && idx[d] + 1 == n) --d;
        if (d < 0) break;
        ++idx[d];
        for (int q = d; q < free; ++q) {
            if (q > d) idx[q] = 0;
            prod[q + 1] = prod[q] * entries[idx[q]];
            sum[q + 1] = sum[q] + idx[q];
            if (sum[q + 1] >= n) sum[q + 1] -= n;
        }
    }
    return total;
}

}  // namespace

TracePower trace_power_spectral(const CirculantSample& sample, int p) {
    if (p < 0) throw std::invalid_argument("trace_power_spectral: p must be >= 0");
    TracePower out;
    out.n = sample.n;
    out.p = p;
    out.route = TraceRoute::spectral;
    out.value = (p == 0) ? static_cast<double>(sample.n)
                         : trace_from_eigenvalues(circulant_eigenvalues(sample), p);
    return out;
}

TracePower trace_power_combinatorial(const CirculantSample& sample, int p, double budget) {
    if (p < 1) throw std::invalid_argument("trace_power_combinatorial: p must be >= 1");
    check_budget(sample.n, p, budget, "trace_power_combinatorial");
    TracePower out;
    out.n = sample.n;
    out.p = p;
    out.route = TraceRoute::combinatorial;
    const double scale = std::pow(static_cast<double>(sample.n), 1.0 - p / 2.0);
    out.value = scale * a_p_product_sum(sample.entries, sample.n, p);
    return out;
}

double expected_trace_power_exact(std::size_t n, int p, double t, double budget) {
    if (p < 0) throw std::invalid_argument("expected_trace_power_exact: p must be >= 0");
    if (p == 0) return static_cast<double>(n);
    if (p % 2 == 1) return 0.0;  // odd Gaussian moments vanish
    check_budget(n, p, budget, "expected_trace_power_exact");

    // enumerate A_p; a tuple survives only when every distinct index has
    // even multiplicity 2k, contributing prod (2k-1)!!
    const double tpow = std::pow(t, p / 2.0);
    double total = 0.0;
    std::vector<std::size_t> tuple(p, 0);
    auto leaf_weight = [&](const std::vector<std::size_t>& tup) -> double {
        double weight = 1.0;
        for (int a = 0; a < p; ++a) {
            bool seen_before = false;
            for (int b = 0; b < a; ++b)
                if (tup[b] == tup[a]) { seen_before = true; break; }
            if (seen_before) continue;
            int count = 0;
            for (int b = a; b < p; ++b)
                if (tup[b] == tup[a]) ++count;
            if (count % 2 == 1) return 0.0;
            for (int m = count - 1; m > 1; m -= 2) weight *= m;  // (2k-1)!!
        }
        return weight;
    };

    const int free = p - 1;
    std::vector<std::size_t> sum(free + 1, 0);
    while (true) {
        tuple[free] = (n - sum[free]) % n;
        total += leaf_weight(tuple);
        int d = free - 1;
        while (d >= 0 && tuple[d] + 1 == n) --d;
        if (d < 0) break;
        ++tuple[d];
        for (int q = d; q < free; ++q) {
            if (q > d) tuple[q] = 0;
            sum[q + 1] = sum[q] + tuple[q];
            if (sum[q + 1] >= n) sum[q + 1] -= n;
        }
    }
    const double scale = std::pow(static_cast<double>(n), 1.0 - p / 2.0);
    return scale * tpow * total;
}

FluctuationSeries fluctuation_series(const PathEnsemble& ensemble, int p,
                                     const std::vector<double>& times, Centering centering,
                                     TraceRoute route, double budget, bool allow_degenerate,
                                     int threads) {
    if (p < 0) throw std::domain_error("fluctuation_series: p must be >= 0");
    if (p < 2 && !allow_degenerate)
        throw std::domain_error(
            "fluctuation_series: p=" + std::to_string(p) +
            " is degenerate — w_0 is identically zero and w_1 equals b_0(t); "
            "request p >= 2 or set the degenerate-case flag");
    if (times.empty()) throw std::invalid_argument("fluctuation_series: no times requested");

    FluctuationSeries out;
    out.p = p;
    out.times = times;
    out.replicas = ensemble.replicas();
    out.centering = centering;
    out.route = route;
    out.n = ensemble.n_entries();
    out.seed = ensemble.seed();
    out.values.resize(times.size() * out.replicas);
    out.centering_values.resize(times.size(), 0.0);

    const std::size_t n = ensemble.n_entries();
    const std::size_t R = ensemble.replicas();
    std::vector<std::size_t> kidx(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) kidx[j] = ensemble.grid().index_of(times[j]);

    if (p < 2) {
        // exact identities: w_0 = 0, w_1 = b_0(t)
        for (std::size_t j = 0; j < times.size(); ++j) {
            out.centering_values[j] = (p == 0) ? static_cast<double>(n) : 0.0;
            for (std::size_t r = 0; r < R; ++r)
                out.values[j * R + r] = (p == 0) ? 0.0 : ensemble.value(r, 0, kidx[j]);
        }
        return out;
    }

    if (route == TraceRoute::combinatorial) check_budget(n, p, budget, "fluctuation_series");

    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    // raw traces per (time, replica); replicas are independent, so the
    // work parallelizes with no effect on values
    std::vector<double> traces(times.size() * R);
    auto run_range = [&](std::size_t r0, std::size_t r1) {
        Dft plan(n);
        std::vector<double> entries(n);
        std::vector<std::complex<double>> eig(n);
        for (std::size_t r = r0; r < r1; ++r) {
            for (std::size_t j = 0; j < times.size(); ++j) {
                for (std::size_t i = 0; i < n; ++i) entries[i] = ensemble.value(r, i, kidx[j]);
                if (route == TraceRoute::spectral) {
                    plan.transform(entries.data(), eig.data());
                    const double scale = inv_sqrt_n;
                    for (auto& z : eig) z *= scale;
                    traces[j * R + r] = trace_from_eigenvalues(eig, p);
                } else {
                    const double scale = std::pow(static_cast<double>(n), 1.0 - p / 2.0);
                    traces[j * R + r] = scale * a_p_product_sum(entries, n, p);
                }
            }
        }
    };
    if (threads <= 1 || R == 1) {
        run_range(0, R);
    } else {
        const std::size_t nt = std::min<std::size_t>(threads, R);
        std::vector<std::thread> pool;
        const std::size_t chunk = (R + nt - 1) / nt;
        for (std::size_t t = 0; t < nt; ++t) {
            const std::size_t r0 = t * chunk;
            const std::size_t r1 = std::min(R, r0 + chunk);
            if (r0 >= r1) break;
            pool.emplace_back(run_range, r0, r1);
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t j = 0; j < times.size(); ++j) {
        double c;
        if (centering == Centering::exact) {
            c = expected_trace_power_exact(n, p, times[j], budget);
        } else {
            // fixed replica order keeps the reduction bit-stable
            double s = 0.0;
            for (std::size_t r = 0; r < R; ++r) s += traces[j * R + r];
            c = s / static_cast<double>(R);
        }
        out.centering_values[j] = c;
        for (std::size_t r = 0; r < R; ++r)
            out.values[j * R + r] = inv_sqrt_n * (traces[j * R + r] - c);
    }
    return out;
}

}  // namespace circlt
