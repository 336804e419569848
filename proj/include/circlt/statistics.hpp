#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "circlt/brownian.hpp"
#include "circlt/circulant.hpp"
#include "circlt/kernel.hpp"

namespace circlt {

struct MomentEstimate {
    double value = 0;
    double std_error = 0;
    std::size_t replicas = 0;
    double prediction = 0;  // companion limit prediction where applicable

    double z_score() const { return std_error > 0 ? (value - prediction) / std_error : 0.0; }
};

inline constexpr std::size_t kDefaultBootstrapResamples = 500;

/// Nonparametric bootstrap standard error of a statistic of one or more
/// replica-paired sample columns. Resampling uses a counter substream
/// derived from `seed`, so results are deterministic and order-free.
double bootstrap_std_error(const std::vector<std::span<const double>>& columns,
                           const std::function<double(const std::vector<std::span<const double>>&,
                                                      const std::vector<std::size_t>&)>& statistic,
                           std::uint64_t seed,
                           std::size_t resamples = kDefaultBootstrapResamples);

/// Sample covariance across paired replicas of w_p(t1) and w_q(t2), with a
/// bootstrap standard error and the limit-kernel prediction attached.
/// Throws pairing_error when the series do not come from one ensemble.
MomentEstimate empirical_covariance(const FluctuationSeries& wp, double t1,
                                    const FluctuationSeries& wq, double t2,
                                    Convention convention = Convention::normalized,
                                    std::size_t bootstrap_resamples = kDefaultBootstrapResamples);

/// Mean across replicas of the product w_{p_1}(t_1) ... w_{p_l}(t_l),
/// paired by replica; l <= 6 (product estimators blow up beyond that).
MomentEstimate mixed_moment(const std::vector<std::pair<const FluctuationSeries*, double>>& factors,
                            std::size_t bootstrap_resamples = kDefaultBootstrapResamples);

/// Wick evaluation of E[N_{p_1}(t_1) ... N_{p_l}(t_l)]: sum over all pair
/// partitions of products of kernel values. Odd l gives 0. l <= 12.
double wick_moment(const std::vector<Label>& labels,
                   Convention convention = Convention::normalized);

struct NormalityReport {
    std::size_t replicas = 0;
    double skewness = 0;
    double skewness_se = 0;        // sqrt(6/R)
    double excess_kurtosis = 0;
    double excess_kurtosis_se = 0; // sqrt(24/R)
    double ks_statistic = 0;
    double ks_pvalue = 0;
    bool degenerate = false;       // zero-variance input
};

/// Moment diagnostics plus a one-sample KS test against N(0, predicted
/// variance), using the asymptotic distribution of the KS statistic.
NormalityReport normality_diagnostics(std::span<const double> samples, double predicted_variance);

struct ScalingFit {
    struct Point {
        double gap = 0;        // |t - s|
        double moment = 0;     // E |w_p(t) - w_p(s)|^4
        double std_error = 0;
    };
    std::vector<Point> points;
    double slope = 0;
    double intercept = 0;
    double slope_std_error = 0;
    double implied_constant = 0;  // max moment / gap^2 over the fitted pairs
};

/// Estimate E|w_p(t) - w_p(s)|^4 per time pair and fit log-moment against
/// log-gap. Requires >= 4 pairs with distinct gaps and max/min gap >= 4.
ScalingFit increment_moment_scaling(const PathEnsemble& ensemble, int p,
                                    const std::vector<std::pair<double, double>>& time_pairs,
                                    Centering centering = Centering::exact,
                                    double budget = kDefaultEnumerationBudget,
                                    int threads = 1);

// plain helpers used throughout
double sample_mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // unbiased (R-1)
double standard_normal_cdf(double x);
double kolmogorov_pvalue(double lambda);  // Q_KS tail

}  // namespace circlt
