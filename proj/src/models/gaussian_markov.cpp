#include "abcpred/models/gaussian_markov.hpp"

#include <algorithm>
#include <cmath>

#include "abcpred/core/errors.hpp"

namespace abcpred {

GaussianMarkovModel::GaussianMarkovModel(double phi, double sigma2, std::size_t n,
                                         std::vector<std::size_t> future_times, double y0)
    : phi_(phi), sigma2_(sigma2), sigma_(std::sqrt(sigma2)), n_(n), future_(std::move(future_times)), y0_(y0) {
    if (!(sigma2 >= 0.0) || n == 0) throw UsageError("gaussian_markov: need sigma2 >= 0 and n >= 1");
    if (future_.empty()) future_.push_back(n + 1);
    for (std::size_t i = 0; i < future_.size(); ++i) {
        if (future_[i] <= n || (i > 0 && future_[i] <= future_[i - 1])) {
            throw UsageError("gaussian_markov: future times must be increasing and beyond n");
        }
    }
}

std::vector<double> GaussianMarkovModel::observation_times() const {
    std::vector<double> t(n_);
    for (std::size_t i = 0; i < n_; ++i) t[i] = static_cast<double>(i + 1);
    return t;
}

std::vector<double> GaussianMarkovModel::future_times() const {
    return {future_.begin(), future_.end()};
}

SimOutput GaussianMarkovModel::simulate(const ParamVector& theta, SimMode mode, Rng& rng) const {
    const double c = theta[0];
    std::vector<double> y(n_);
    double prev = y0_;
    for (std::size_t t = 0; t < n_; ++t) {
        prev = c + phi_ * prev + sigma_ * rng.normal();
        y[t] = prev;
    }
    SimOutput out;
    out.observed = TimeSeriesData(observation_times(), 1, std::move(y));
    out.latent_state = {prev};
    if (mode == SimMode::joint) out.future = continue_from(out.latent_state, theta, rng).path;
    return out;
}

Forecast GaussianMarkovModel::continue_from(std::span<const double> state, const ParamVector& theta,
                                            Rng& rng) const {
    if (state.size() != 1) throw UsageError("gaussian_markov: continuation state is (y_n)");
    const double c = theta[0];
    double y = state[0];
    std::vector<double> path;
    path.reserve(future_.size());
    std::size_t t = n_;
    for (std::size_t target : future_) {
        while (t < target) {
            y = c + phi_ * y + sigma_ * rng.normal();
            ++t;
        }
        path.push_back(y);
    }
    return {TimeSeriesData(future_times(), 1, std::move(path)), false};
}

std::vector<double> GaussianMarkovModel::observed_state(const TimeSeriesData& observed) const {
    if (observed.size() != n_ || observed.width() != 1) throw UsageError("gaussian_markov: observed data shape");
    return {observed.value(n_ - 1, 0)};
}

std::vector<double> GaussianMarkovModel::merge_latent(const TimeSeriesData& observed,
                                                      std::span<const double>) const {
    return observed_state(observed);
}

}  // namespace abcpred
