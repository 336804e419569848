#include "circlt/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "circlt/errors.hpp"
#include "circlt/rng.hpp"

namespace circlt {

double sample_mean(std::span<const double> xs) {
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    const double m = sample_mean(xs);
    double s = 0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

double kolmogorov_pvalue(double lambda) {
    if (lambda <= 0) return 1.0;
    double sum = 0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double bootstrap_std_error(const std::vector<std::span<const double>>& columns,
                           const std::function<double(const std::vector<std::span<const double>>&,
                                                      const std::vector<std::size_t>&)>& statistic,
                           std::uint64_t seed, std::size_t resamples) {
    if (columns.empty()) throw std::invalid_argument("bootstrap: no data columns");
    const std::size_t R = columns.front().size();
    for (const auto& c : columns)
        if (c.size() != R) throw pairing_error("bootstrap: columns have mismatched lengths");
    if (resamples < 2) throw std::invalid_argument("bootstrap: need at least 2 resamples");

    const std::uint64_t boot_seed = mix64(seed ^ rng_tag::bootstrap);
    std::vector<std::size_t> idx(R);
    std::vector<double> stats(resamples);
    for (std::size_t b = 0; b < resamples; ++b) {
        const CounterRng rng = CounterRng::stream(boot_seed, b, 0);
        for (std::size_t i = 0; i < R; ++i) idx[i] = rng.index(i, R);
        stats[b] = statistic(columns, idx);
    }
    return std::sqrt(sample_variance(stats));
}

namespace {

double cov_of_resample(const std::vector<std::span<const double>>& cols,
                       const std::vector<std::size_t>& idx) {
    const auto& x = cols[0];
    const auto& y = cols[1];
    const std::size_t R = idx.size();
    double mx = 0, my = 0;
    for (std::size_t i : idx) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(R);
    my /= static_cast<double>(R);
    double c = 0;
    for (std::size_t i : idx) c += (x[i] - mx) * (y[i] - my);
    return c / static_cast<double>(R - 1);
}

double product_mean_of_resample(const std::vector<std::span<const double>>& cols,
                                const std::vector<std::size_t>& idx) {
    double s = 0;
    for (std::size_t i : idx) {
        double prod = 1;
        for (const auto& c : cols) prod *= c[i];
        s += prod;
    }
    return s / static_cast<double>(idx.size());
}

}  // namespace

MomentEstimate empirical_covariance(const FluctuationSeries& wp, double t1,
                                    const FluctuationSeries& wq, double t2,
                                    Convention convention, std::size_t bootstrap_resamples) {
    if (!wp.paired_with(wq))
        throw pairing_error("empirical_covariance: series are not replica-paired "
                            "(they must come from one ensemble)");
    if (wp.replicas < 100)
        throw std::invalid_argument("empirical_covariance: need at least 100 replicas");

    const std::size_t R = wp.replicas;
    std::span<const double> x(wp.column(wp.time_index(t1)), R);
    std::span<const double> y(wq.column(wq.time_index(t2)), R);

    MomentEstimate est;
    est.replicas = R;
    const double mx = sample_mean(x);
    const double my = sample_mean(y);
    double c = 0;
    for (std::size_t i = 0; i < R; ++i) c += (x[i] - mx) * (y[i] - my);
    est.value = c / static_cast<double>(R - 1);
    est.prediction = kernel_value(wp.p, wq.p, t1, t2, convention);
    est.std_error = bootstrap_std_error({x, y}, cov_of_resample,
                                        wp.seed + 0x636f76 /* per-statistic stream */,
                                        bootstrap_resamples);
    return est;
}

MomentEstimate mixed_moment(const std::vector<std::pair<const FluctuationSeries*, double>>& factors,
                            std::size_t bootstrap_resamples) {
    if (factors.empty()) throw std::invalid_argument("mixed_moment: no factors");
    if (factors.size() > 6)
        throw std::invalid_argument("mixed_moment: more than 6 factors (product estimators "
                                    "degenerate; raise moments via wick_moment instead)");
    const FluctuationSeries& first = *factors.front().first;
    for (const auto& [s, t] : factors)
        if (!s->paired_with(first))
            throw pairing_error("mixed_moment: factor series are not replica-paired");

    const std::size_t R = first.replicas;
    std::vector<std::span<const double>> cols;
    cols.reserve(factors.size());
    for (const auto& [s, t] : factors) cols.emplace_back(s->column(s->time_index(t)), R);

    MomentEstimate est;
    est.replicas = R;
    double sum = 0;
    for (std::size_t i = 0; i < R; ++i) {
        double prod = 1;
        for (const auto& c : cols) prod *= c[i];
        sum += prod;
    }
    est.value = sum / static_cast<double>(R);
    est.std_error = bootstrap_std_error(cols, product_mean_of_resample,
                                        first.seed + 0x6d6f6d, bootstrap_resamples);
    return est;
}

double wick_moment(const std::vector<Label>& labels, Convention convention) {
    const int l = static_cast<int>(labels.size());
    if (l % 2 == 1) return 0.0;
    if (l > 12) throw std::invalid_argument("wick_moment: more than 12 labels");
    double total = 0;
    for (const auto& partition : pair_partitions(l)) {
        double prod = 1;
        for (const auto& [y, z] : partition.pairs)
            prod *= kernel_value(labels[y].p, labels[z].p, labels[y].t, labels[z].t, convention);
        total += prod;
    }
    return total;
}

NormalityReport normality_diagnostics(std::span<const double> samples, double predicted_variance) {
    if (samples.size() < 1000)
        throw std::invalid_argument("normality_diagnostics: need at least 1000 samples");
    if (predicted_variance < 0)
        throw std::invalid_argument("normality_diagnostics: negative predicted variance");

    NormalityReport rep;
    const std::size_t R = samples.size();
    rep.replicas = R;
    rep.skewness_se = std::sqrt(6.0 / static_cast<double>(R));
    rep.excess_kurtosis_se = std::sqrt(24.0 / static_cast<double>(R));

    const double mean = sample_mean(samples);
    double m2 = 0, m3 = 0, m4 = 0;
    for (double x : samples) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(R);
    m3 /= static_cast<double>(R);
    m4 /= static_cast<double>(R);

    if (m2 <= 0 || predicted_variance == 0) {
        rep.degenerate = true;
        return rep;
    }
    rep.skewness = m3 / std::pow(m2, 1.5);
    rep.excess_kurtosis = m4 / (m2 * m2) - 3.0;

    // one-sample KS against N(0, predicted variance); asymptotic p-value
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double sigma = std::sqrt(predicted_variance);
    double d_stat = 0;
    for (std::size_t i = 0; i < R; ++i) {
        const double f = standard_normal_cdf(sorted[i] / sigma);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(R) - f;
        const double lo = f - static_cast<double>(i) / static_cast<double>(R);
        d_stat = std::max({d_stat, hi, lo});
    }
    rep.ks_statistic = d_stat;
    const double sqrt_r = std::sqrt(static_cast<double>(R));
    rep.ks_pvalue = kolmogorov_pvalue((sqrt_r + 0.12 + 0.11 / sqrt_r) * d_stat);
    return rep;
}

ScalingFit increment_moment_scaling(const PathEnsemble& ensemble, int p,
                                    const std::vector<std::pair<double, double>>& time_pairs,
                                    Centering centering, double budget, int threads) {
    if (time_pairs.empty()) throw std::invalid_argument("increment_moment_scaling: no time pairs");

    std::vector<double> gaps;
    for (const auto& [t, s] : time_pairs) {
        const double g = std::abs(t - s);
        if (g > 0 && std::find(gaps.begin(), gaps.end(), g) == gaps.end()) gaps.push_back(g);
    }
    if (gaps.size() < 4)
        throw std::invalid_argument(
            "increment_moment_scaling: need at least 4 pairs with distinct nonzero |t-s|");
    const auto [gmin, gmax] = std::minmax_element(gaps.begin(), gaps.end());
    if (*gmax / *gmin < 4.0)
        throw std::invalid_argument(
            "increment_moment_scaling: gaps must span at least a factor of 4");

    // one series evaluation over the union of requested times
    std::vector<double> times;
    for (const auto& [t, s] : time_pairs) {
        if (std::find(times.begin(), times.end(), t) == times.end()) times.push_back(t);
        if (std::find(times.begin(), times.end(), s) == times.end()) times.push_back(s);
    }
    const FluctuationSeries series =
        fluctuation_series(ensemble, p, times, centering, TraceRoute::spectral, budget, false,
                           threads);
    const std::size_t R = series.replicas;

    ScalingFit fit;
    std::vector<double> deltas(R);
    for (const auto& [t, s] : time_pairs) {
        const double* ct = series.column(series.time_index(t));
        const double* cs = series.column(series.time_index(s));
        double m4 = 0;
        for (std::size_t r = 0; r < R; ++r) {
            const double d = ct[r] - cs[r];
            deltas[r] = d;
            m4 += d * d * d * d;
        }
        m4 /= static_cast<double>(R);
        ScalingFit::Point pt;
        pt.gap = std::abs(t - s);
        pt.moment = m4;
        pt.std_error = bootstrap_std_error(
            {std::span<const double>(deltas.data(), R)},
            [](const std::vector<std::span<const double>>& cols, const std::vector<std::size_t>& idx) {
                double s4 = 0;
                for (std::size_t i : idx) s4 += cols[0][i] * cols[0][i] * cols[0][i] * cols[0][i];
                return s4 / static_cast<double>(idx.size());
            },
            ensemble.seed() + static_cast<std::uint64_t>(pt.gap * 1e9));
        fit.points.push_back(pt);
    }

    // OLS of log moment on log gap over the positive-gap points
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto& pt : fit.points) {
        if (pt.gap <= 0 || pt.moment <= 0) continue;
        const double x = std::log(pt.gap);
        const double y = std::log(pt.moment);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    fit.slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / static_cast<double>(m);
    double ssr = 0;
    for (const auto& pt : fit.points) {
        if (pt.gap <= 0 || pt.moment <= 0) continue;
        const double resid = std::log(pt.moment) - (fit.intercept + fit.slope * std::log(pt.gap));
        ssr += resid * resid;
    }
    if (m > 2) {
        const double sigma2 = ssr / static_cast<double>(m - 2);
        fit.slope_std_error = std::sqrt(sigma2 * static_cast<double>(m) / denom);
    }
    fit.implied_constant = 0;
    for (const auto& pt : fit.points)
        if (pt.gap > 0)
            fit.implied_constant = std::max(fit.implied_constant, pt.moment / (pt.gap * pt.gap));
    return fit;
}

}  // namespace circlt
