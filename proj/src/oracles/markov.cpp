#include <cmath>

#include "abcpred/core/errors.hpp"
#include "abcpred/core/stats.hpp"
#include "abcpred/oracles/oracles.hpp"

namespace abcpred {

Gaussian1D::Gaussian1D(double m, double v) : mean(m), variance(v) {
    if (!(v > 0.0) || !std::isfinite(v) || !std::isfinite(m)) throw UsageError("Gaussian1D: need finite mean and variance > 0");
}

ABCoefficients ab_coefficients(double phi, std::size_t n) {
    if (std::abs(phi) == 1.0) throw UsageError("ab_coefficients: |phi| = 1 is singular");
    if (n == 0) throw UsageError("ab_coefficients: n must be positive");
    const double N = static_cast<double>(n);
    const double phin = std::pow(phi, N);
    const double a = (1.0 - std::pow(phi, 2.0 * (N + 1.0))) / (1.0 - phi * phi) -
                     phi * phi * (1.0 - phin) * (1.0 - phin) / (N * (1.0 - phi) * (1.0 - phi));
    const double b = 1.0 + phi * (1.0 - phin) / (1.0 - phi);
    return {a, b};
}

Gaussian1D markov_c_posterior(const GaussianMarkovModel& model, double ybar, double h) {
    if (!(h >= 0.0)) throw UsageError("markov_c_posterior: h must be nonnegative");
    return {ybar, model.sigma2() / static_cast<double>(model.n()) + h * h};
}

Gaussian1D markov_predictive(const GaussianMarkovModel& model, const MarkovSummaries& s, MarkovVariant variant,
                             double h, std::size_t p) {
    if (!(h >= 0.0)) throw UsageError("markov_predictive: h must be nonnegative");
    const double phi = model.phi();
    const double s2 = model.sigma2();
    const double n = static_cast<double>(model.n());
    const double ring = s.ybar + phi * s.yn;
    switch (variant) {
        case MarkovVariant::exact: return {ring, s2 + s2 / n};
        case MarkovVariant::P_sbar: {
            const auto ab = ab_coefficients(phi, model.n());
            return {ab.b * s.ybar, ab.a * s2 + s2 / n + ab.b * ab.b * h * h};
        }
        case MarkovVariant::P_ring:
        case MarkovVariant::F_sbar: return {ring, s2 + s2 / n + h * h};
        case MarkovVariant::multistep: {
            if (p == 0) throw UsageError("markov_predictive: p must be at least 1");
            if (std::abs(phi) == 1.0) throw UsageError("markov_predictive: |phi| = 1 is singular");
            const double phip = std::pow(phi, static_cast<double>(p));
            const double g = (1.0 - phip) / (1.0 - phi);
            return {g * s.ybar + phip * s.yn,
                    s2 * (1.0 - phip * phip) / (1.0 - phi * phi) + g * g * (s2 / n + h * h)};
        }
    }
    throw UsageError("markov_predictive: unknown variant");
}

double markov_mean(double c, double phi, std::size_t t) {
    double g = 0.0;
    double pw = 1.0;
    for (std::size_t k = 0; k < t; ++k) {
        g += pw;
        pw *= phi;
    }
    return c * g;
}

double markov_variance(double sigma2, double phi, std::size_t t) { return markov_covariance(sigma2, phi, t, t); }

double markov_covariance(double sigma2, double phi, std::size_t s, std::size_t t) {
    if (s > t) std::swap(s, t);
    // sum_{k=1}^{s} phi^{(s-k)+(t-k)}
    double sum = 0.0;
    for (std::size_t k = 1; k <= s; ++k) sum += std::pow(phi, static_cast<double>((s - k) + (t - k)));
    return sigma2 * sum;
}

AcceptanceBound acceptance_bound(double phi, double sigma2, std::size_t n, double h_tilde) {
    if (!(h_tilde > 0.0) || n == 0 || !(sigma2 > 0.0)) {
        throw UsageError("acceptance_bound: need h_tilde > 0, sigma2 > 0, n >= 1");
    }
    const double lead = std::sqrt(2.0) * h_tilde / std::sqrt(M_PI * sigma2);
    const double ap = std::abs(phi);
    if (ap > 1.0) {
        const double N = static_cast<double>(n);
        return {AcceptanceBound::Kind::upper,
                lead * std::sqrt(phi * phi - 1.0) / std::sqrt(std::pow(phi, 2.0 * N) - 1.0)};
    }
    if (ap == 1.0) return {AcceptanceBound::Kind::upper, lead / std::sqrt(static_cast<double>(n))};
    return {AcceptanceBound::Kind::lower,
            lead * std::sqrt(1.0 - phi * phi) * std::exp(-h_tilde * h_tilde / (2.0 * sigma2))};
}

double markov_last_value_acceptance(double c, double phi, double sigma2, std::size_t n, double yn, double h_tilde) {
    const double m = markov_mean(c, phi, n);
    const double sd = std::sqrt(markov_variance(sigma2, phi, n));
    return stats::normal_cdf(yn + h_tilde, m, sd) - stats::normal_cdf(yn - h_tilde, m, sd);
}

}  // namespace abcpred
