#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abcpred/core/rng.hpp"
#include "abcpred/core/types.hpp"
#include "abcpred/models/gaussian_markov.hpp"
#include "abcpred/models/linear_gaussian_ssm.hpp"
#include "abcpred/models/lotka_volterra.hpp"

namespace abcpred {

struct Gaussian1D {
    double mean = 0.0;
    double variance = 1.0;

    Gaussian1D() = default;
    Gaussian1D(double m, double v);
    double sd() const { return std::sqrt(variance); }
    friend bool operator==(const Gaussian1D&, const Gaussian1D&) = default;
};

struct ABCoefficients {
    double a;
    double b;
};

/// Variance inflation a and mean scale b of the predictive built on the
/// weighted average alone. Throws UsageError at |phi| = 1.
ABCoefficients ab_coefficients(double phi, std::size_t n);

/// ABC posterior of c under a flat prior and a Gaussian kernel of width h on ybar.
Gaussian1D markov_c_posterior(const GaussianMarkovModel& model, double ybar, double h);

struct MarkovSummaries {
    double ybar = 0.0;  ///< weighted average
    double yn = 0.0;    ///< last observation
};

enum class MarkovVariant {
    exact,     ///< pi(y_{n+1} | y)
    P_sbar,    ///< ABC-P on the weighted average
    P_ring,    ///< ABC-P on ybar + phi y_n
    F_sbar,    ///< ABC-F with c from the weighted average
    multistep  ///< ABC-F p steps ahead
};

Gaussian1D markov_predictive(const GaussianMarkovModel& model, const MarkovSummaries& s, MarkovVariant variant,
                             double h = 0.0, std::size_t p = 1);

/// Moments of y_t given c from y_0 = 0.
double markov_mean(double c, double phi, std::size_t t);
double markov_variance(double sigma2, double phi, std::size_t t);
double markov_covariance(double sigma2, double phi, std::size_t s, std::size_t t);

struct SsmPosteriors {
    Gaussian1D c_posterior;
    Gaussian1D vn_posterior;
    Gaussian1D predictive_yn1;
    Eigen::Vector2d joint_mean;  ///< (v_n, c)
    Eigen::Matrix2d joint_cov;
};

/// Exact flat-prior posteriors for the state-space example. n <= 500.
SsmPosteriors ssm_posteriors(const LinearGaussianSSM& model, std::span<const double> y);

/// Same quantities by conditioning the joint Gaussian of (c, v_n, y_{1:n}, y_{n+1})
/// with c ~ N(0, prior_variance).
SsmPosteriors ssm_posteriors_bruteforce(const LinearGaussianSSM& model, std::span<const double> y,
                                        double prior_variance = 1e6);

struct AcceptanceBound {
    enum class Kind { upper, lower };
    Kind kind;
    double value;
};

/// Bound on max_c P(|z_n - y_n| <= h_tilde | c) for the Markov example.
AcceptanceBound acceptance_bound(double phi, double sigma2, std::size_t n, double h_tilde);

/// Exact P(|z_n - y_n| <= h_tilde | c).
double markov_last_value_acceptance(double c, double phi, double sigma2, std::size_t n, double yn, double h_tilde);

/// n_draws forward paths from a continuation state at theta.
std::vector<TimeSeriesData> ideal_predictive(const Model& model, std::span<const double> state,
                                             const ParamVector& theta, std::size_t n_draws, Rng& rng);

struct GapPredictive {
    std::vector<TimeSeriesData> paths;  ///< accepted gap paths
    std::size_t n_tried = 0;
    std::size_t n_accepted = 0;
    std::string diagnostic;  ///< nonempty when nothing was accepted
};

/// Missing-data baseline: simulate from the state at t1 through the gap to t2 and
/// keep paths whose t2 state is within L-infinity `radius` of `state_t2`.
GapPredictive ideal_gap_predictive(const LotkaVolterraModel& model, std::span<const double> state_t1,
                                   std::span<const double> state_t2, const ParamVector& theta, std::size_t n_draws,
                                   double radius, Rng& rng);

}  // namespace abcpred
