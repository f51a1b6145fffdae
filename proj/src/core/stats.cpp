#include "abcpred/core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "abcpred/core/errors.hpp"

namespace abcpred::stats {

double mean(std::span<const double> x) {
    if (x.empty()) throw UsageError("mean of empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) throw UsageError("variance needs at least two values");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double sd(std::span<const double> x) { return std::sqrt(variance(x)); }

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw UsageError("quantile of empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("quantile level must lie in [0, 1]");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size() || frac == 0.0) return sorted[lo];
    const double a = sorted[lo];
    const double b = sorted[lo + 1];
    if (std::isinf(b)) return b;
    return a + frac * (b - a);
}

double quantile(std::span<const double> x, double p) {
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    return quantile_sorted(s, p);
}

double median(std::span<const double> x) { return quantile(x, 0.5); }

double mad(std::span<const double> x) {
    const double m = median(x);
    std::vector<double> dev(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) dev[i] = std::abs(x[i] - m);
    return median(dev);
}

double autocorrelation(std::span<const double> x, std::size_t lag) {
    if (x.size() <= lag) throw UsageError("autocorrelation: series shorter than lag");
    const double m = mean(x);
    double den = 0.0;
    for (double v : x) den += (v - m) * (v - m);
    if (den <= 0.0) return 0.0;
    double num = 0.0;
    for (std::size_t t = 0; t + lag < x.size(); ++t) num += (x[t] - m) * (x[t + lag] - m);
    return num / den;
}

double cross_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) throw UsageError("cross_correlation: series lengths differ");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

double weighted_mean(std::span<const double> x, std::span<const double> w) {
    if (x.size() != w.size()) throw UsageError("weighted_mean: length mismatch");
    double sw = 0.0;
    double swx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        swx += w[i] * x[i];
    }
    if (sw <= 0.0) throw DegenerateSampleError("weighted_mean: zero total weight", std::numeric_limits<double>::quiet_NaN());
    return swx / sw;
}

double weighted_variance(std::span<const double> x, std::span<const double> w) {
    const double m = weighted_mean(x, w);
    double sw = 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        ss += w[i] * (x[i] - m) * (x[i] - m);
    }
    return ss / sw;
}

namespace {
std::vector<std::size_t> order_of(std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    return idx;
}
}  // namespace

double repeated_quantile(std::span<const double> x, std::span<const double> counts, double p) {
    if (x.size() != counts.size() || x.empty()) throw UsageError("repeated_quantile: bad input");
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("quantile level must lie in [0, 1]");
    const auto idx = order_of(x);
    double total = 0.0;
    for (double c : counts) total += c;
    if (total < 1.0) throw UsageError("repeated_quantile: empty expanded sample");
    const double pos = p * (total - 1.0);
    const double lo_rank = std::floor(pos);
    const double frac = pos - lo_rank;
    // value at 0-based rank r in the expanded sample
    auto at_rank = [&](double r) {
        double cum = 0.0;
        for (std::size_t k : idx) {
            cum += counts[k];
            if (r < cum) return x[k];
        }
        return x[idx.back()];
    };
    const double a = at_rank(lo_rank);
    if (frac == 0.0) return a;
    const double b = at_rank(lo_rank + 1.0);
    return a + frac * (b - a);
}

double weighted_quantile(std::span<const double> x, std::span<const double> w, double p) {
    if (x.size() != w.size() || x.empty()) throw UsageError("weighted_quantile: bad input");
    const auto idx = order_of(x);
    double total = 0.0;
    for (double v : w) total += v;
    if (total <= 0.0) throw DegenerateSampleError("weighted_quantile: zero total weight", std::numeric_limits<double>::quiet_NaN());
    double cum = 0.0;
    for (std::size_t k : idx) {
        cum += w[k];
        if (cum >= p * total * (1.0 - 1e-12)) return x[k];
    }
    return x[idx.back()];
}

double ks_normal(std::span<const double> x, std::span<const double> w, double mean, double sd) {
    if (x.size() != w.size() || x.empty()) throw UsageError("ks_normal: bad input");
    const auto idx = order_of(x);
    double total = 0.0;
    for (double v : w) total += v;
    double cum = 0.0;
    double d = 0.0;
    std::size_t i = 0;
    while (i < idx.size()) {
        const double v = x[idx[i]];
        const double f = normal_cdf(v, mean, sd);
        d = std::max(d, std::abs(f - cum / total));
        while (i < idx.size() && x[idx[i]] == v) cum += w[idx[i++]];
        d = std::max(d, std::abs(f - cum / total));
    }
    return d;
}

double ks_normal(std::span<const double> x, double mean, double sd) {
    std::vector<double> w(x.size(), 1.0);
    return ks_normal(x, w, mean, sd);
}

double ks_two_sample(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                     std::span<const double> wb) {
    if (a.size() != wa.size() || b.size() != wb.size() || a.empty() || b.empty()) {
        throw UsageError("ks_two_sample: bad input");
    }
    const auto ia = order_of(a);
    const auto ib = order_of(b);
    double ta = 0.0;
    double tb = 0.0;
    for (double v : wa) ta += v;
    for (double v : wb) tb += v;
    double ca = 0.0;
    double cb = 0.0;
    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ia.size() || j < ib.size()) {
        double v;
        if (j >= ib.size() || (i < ia.size() && a[ia[i]] <= b[ib[j]])) {
            v = a[ia[i]];
        } else {
            v = b[ib[j]];
        }
        while (i < ia.size() && a[ia[i]] == v) ca += wa[ia[i++]];
        while (j < ib.size() && b[ib[j]] == v) cb += wb[ib[j++]];
        d = std::max(d, std::abs(ca / ta - cb / tb));
    }
    return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    std::vector<double> wa(a.size(), 1.0);
    std::vector<double> wb(b.size(), 1.0);
    return ks_two_sample(a, wa, b, wb);
}

Histogram histogram(std::span<const double> x, std::span<const double> w, std::size_t bins) {
    if (x.size() != w.size() || x.empty() || bins == 0) throw UsageError("histogram: bad input");
    Histogram h;
    h.lo = std::numeric_limits<double>::infinity();
    h.hi = -std::numeric_limits<double>::infinity();
    for (double v : x) {
        if (!std::isfinite(v)) continue;
        h.lo = std::min(h.lo, v);
        h.hi = std::max(h.hi, v);
    }
    if (!std::isfinite(h.lo)) throw UsageError("histogram: no finite values");
    if (h.hi == h.lo) {
        h.lo -= 0.5;
        h.hi += 0.5;
    }
    h.density.assign(bins, 0.0);
    const double width = (h.hi - h.lo) / static_cast<double>(bins);
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) continue;
        auto b = static_cast<std::size_t>((x[i] - h.lo) / width);
        if (b >= bins) b = bins - 1;
        h.density[b] += w[i];
        total += w[i];
    }
    if (total > 0.0) {
        for (double& d : h.density) d /= total * width;
    }
    return h;
}

double integrated_autocorrelation_time(std::span<const double> chain) {
    const std::size_t n = chain.size();
    if (n < 4) return 1.0;
    const double m = mean(chain);
    double c0 = 0.0;
    for (double v : chain) c0 += (v - m) * (v - m);
    if (c0 <= 0.0) return 1.0;
    auto rho = [&](std::size_t k) {
        double s = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) s += (chain[t] - m) * (chain[t + k] - m);
        return s / c0;
    };
    double tau = -1.0;
    for (std::size_t k = 0; k + 1 < n; k += 2) {
        const double pair = rho(k) + rho(k + 1);
        if (pair <= 0.0) break;
        tau += 2.0 * pair;
    }
    return std::max(tau, 1.0);
}

double batch_means_ess(std::span<const double> chain) {
    const std::size_t n = chain.size();
    if (n < 4) return static_cast<double>(n);
    const auto batch = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    const std::size_t n_batches = n / batch;
    const double v = variance(chain);
    if (v <= 0.0) return static_cast<double>(n);
    std::vector<double> means(n_batches);
    for (std::size_t b = 0; b < n_batches; ++b) {
        means[b] = mean(chain.subspan(b * batch, batch));
    }
    const double vb = variance(means);
    if (vb <= 0.0) return static_cast<double>(n);
    return std::min(static_cast<double>(n), static_cast<double>(n) * v / (static_cast<double>(batch) * vb));
}

std::vector<double> thin(std::span<const double> chain, std::size_t count) {
    if (count == 0 || chain.empty()) return {};
    if (count >= chain.size()) return {chain.begin(), chain.end()};
    std::vector<double> out(count);
    const double stride = static_cast<double>(chain.size()) / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto k = static_cast<std::size_t>((static_cast<double>(i) + 0.5) * stride);
        out[i] = chain[std::min(k, chain.size() - 1)];
    }
    return out;
}

}  // namespace abcpred::stats
