#include "abcpred/models/linear_gaussian_ssm.hpp"

#include <cmath>

#include "abcpred/core/errors.hpp"

namespace abcpred {

LinearGaussianSSM::LinearGaussianSSM(double phi, double sigma2, double omega2, std::size_t n,
                                     std::vector<std::size_t> future_times)
    : phi_(phi), sigma2_(sigma2), omega2_(omega2), n_(n), future_(std::move(future_times)) {
    if (!(omega2 > 0.0) || !(sigma2 >= 0.0) || n == 0) {
        throw UsageError("linear_gaussian_ssm: need omega2 > 0, sigma2 >= 0, n >= 1");
    }
    if (future_.empty()) future_.push_back(n + 1);
    for (std::size_t i = 0; i < future_.size(); ++i) {
        if (future_[i] <= n || (i > 0 && future_[i] <= future_[i - 1])) {
            throw UsageError("linear_gaussian_ssm: future times must be increasing and beyond n");
        }
    }
}

std::vector<double> LinearGaussianSSM::observation_times() const {
    std::vector<double> t(n_);
    for (std::size_t i = 0; i < n_; ++i) t[i] = static_cast<double>(i + 1);
    return t;
}

std::vector<double> LinearGaussianSSM::future_times() const { return {future_.begin(), future_.end()}; }

SimOutput LinearGaussianSSM::simulate(const ParamVector& theta, SimMode mode, Rng& rng) const {
    const double c = theta[0];
    const double sigma = std::sqrt(sigma2_);
    const double omega = std::sqrt(omega2_);
    std::vector<double> y(n_);
    std::vector<double> v(n_);
    double state = 0.0;
    for (std::size_t t = 0; t < n_; ++t) {
        state = c + phi_ * state + sigma * rng.normal();
        v[t] = state;
        y[t] = state + omega * rng.normal();
    }
    SimOutput out;
    out.observed = TimeSeriesData(observation_times(), 1, std::move(y));
    out.observed.set_latents(1, std::move(v));
    out.latent_state = {state};
    if (mode == SimMode::joint) out.future = continue_from(out.latent_state, theta, rng).path;
    return out;
}

Forecast LinearGaussianSSM::continue_from(std::span<const double> state, const ParamVector& theta,
                                          Rng& rng) const {
    if (state.size() != 1) throw UsageError("linear_gaussian_ssm: continuation state is (v_n)");
    const double c = theta[0];
    const double sigma = std::sqrt(sigma2_);
    const double omega = std::sqrt(omega2_);
    double v = state[0];
    std::vector<double> path;
    std::size_t t = n_;
    for (std::size_t target : future_) {
        while (t < target) {
            v = c + phi_ * v + sigma * rng.normal();
            ++t;
        }
        path.push_back(v + omega * rng.normal());
    }
    return {TimeSeriesData(future_times(), 1, std::move(path)), false};
}

std::vector<double> LinearGaussianSSM::merge_latent(const TimeSeriesData&, std::span<const double> latent_state) const {
    if (latent_state.size() != 1) throw UsageError("linear_gaussian_ssm: latent state is (v_n)");
    return {latent_state.begin(), latent_state.end()};
}

}  // namespace abcpred
