#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace abcpred::stats {

double mean(std::span<const double> x);
/// Sample variance with the n-1 divisor.
double variance(std::span<const double> x);
double sd(std::span<const double> x);

/// Type-7 (linear interpolation) empirical quantile. Infinite entries sort last;
/// a quantile that interpolates towards +inf is +inf.
double quantile(std::span<const double> x, double p);
double quantile_sorted(std::span<const double> sorted, double p);
double median(std::span<const double> x);
/// Median absolute deviation from the median (unscaled).
double mad(std::span<const double> x);

/// Biased lag-k autocorrelation sum (x_t - m)(x_{t+k} - m) / sum (x_t - m)^2.
/// A constant series has autocorrelation 0 by convention.
double autocorrelation(std::span<const double> x, std::size_t lag);
/// Lag-0 correlation, each series centred by its own mean; 0 if either is constant.
double cross_correlation(std::span<const double> x, std::span<const double> y);

double normal_cdf(double x, double mean, double sd);

/// Weighted moments; weights need not be normalized.
double weighted_mean(std::span<const double> x, std::span<const double> w);
/// Population-style weighted variance sum w (x - m)^2 / sum w.
double weighted_variance(std::span<const double> x, std::span<const double> w);

/// Quantile of a sample in which x[i] appears counts[i] times (type-7 on the
/// expanded sample). Used for run-length compressed chains.
double repeated_quantile(std::span<const double> x, std::span<const double> counts, double p);
/// Inverse of the weighted empirical CDF: smallest x with F(x) >= p.
double weighted_quantile(std::span<const double> x, std::span<const double> w, double p);

/// sup |F_n - Phi((x - mean)/sd)| for a weighted sample.
double ks_normal(std::span<const double> x, std::span<const double> w, double mean, double sd);
double ks_normal(std::span<const double> x, double mean, double sd);
/// Two-sample statistic sup |F_a - F_b| (weighted empirical CDFs).
double ks_two_sample(std::span<const double> a, std::span<const double> wa,
                     std::span<const double> b, std::span<const double> wb);
double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> density;  ///< integrates to 1 over [lo, hi]
};
/// Weighted histogram with `bins` equal bins over [min x, max x].
Histogram histogram(std::span<const double> x, std::span<const double> w, std::size_t bins);

/// Integrated autocorrelation time via Geyer's initial positive sequence.
double integrated_autocorrelation_time(std::span<const double> chain);

/// Batch-means effective sample size of a chain (sqrt(n) batches).
double batch_means_ess(std::span<const double> chain);

/// Every `stride`-th element starting at stride/2, producing `count` values.

std::vector<double> thin(std::span<const double> chain, std::size_t count);

}  // namespace abcpred::stats
