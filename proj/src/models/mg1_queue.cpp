#include "abcpred/models/mg1_queue.hpp"

#include <algorithm>

#include "abcpred/core/errors.hpp"

namespace abcpred {

MG1Model::MG1Model(std::size_t n, std::size_t n_future) : n_(n), n_future_(n_future) {
    if (n == 0 || n_future == 0) throw UsageError("mg1_queue: need n >= 1 and n_future >= 1");
}

std::vector<double> MG1Model::observation_times() const {
    std::vector<double> t(n_);
    for (std::size_t i = 0; i < n_; ++i) t[i] = static_cast<double>(i + 1);
    return t;
}

std::vector<double> MG1Model::future_times() const {
    std::vector<double> t(n_future_);
    for (std::size_t i = 0; i < n_future_; ++i) t[i] = static_cast<double>(n_ + i + 1);
    return t;
}

namespace {
void check_theta(const ParamVector& theta) {
    if (theta.size() != 3 || theta[0] < 0.0 || theta[1] < theta[0] || theta[2] <= 0.0) {
        throw UsageError("mg1_queue: need 0 <= theta1 <= theta2 and theta3 > 0");
    }
}
}  // namespace

SimOutput MG1Model::simulate(const ParamVector& theta, SimMode mode, Rng& rng) const {
    check_theta(theta);
    std::vector<double> y(n_);
    std::vector<double> arrivals(n_);
    double v = 0.0;
    double x = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        v += rng.exponential(theta[2]);
        const double u = rng.uniform(theta[0], theta[1]);
        y[i] = u + std::max(0.0, v - x);
        x += y[i];
        arrivals[i] = v;
    }
    SimOutput out;
    out.observed = TimeSeriesData(observation_times(), 1, std::move(y));
    out.observed.set_latents(1, std::move(arrivals));
    out.latent_state = {x, v};
    if (mode == SimMode::joint) out.future = continue_from(out.latent_state, theta, rng).path;
    return out;
}

Forecast MG1Model::continue_from(std::span<const double> state, const ParamVector& theta, Rng& rng) const {
    check_theta(theta);
    if (state.size() != 2) throw UsageError("mg1_queue: continuation state is (x_n, v_n)");
    double x = state[0];
    double v = state[1];
    std::vector<double> waits(n_future_);
    for (std::size_t i = 0; i < n_future_; ++i) {
        v += rng.exponential(theta[2]);
        const double u = rng.uniform(theta[0], theta[1]);
        x += u + std::max(0.0, v - x);
        waits[i] = x - v;
    }
    return {TimeSeriesData(future_times(), 1, std::move(waits)), false};
}

std::vector<double> MG1Model::merge_latent(const TimeSeriesData& observed, std::span<const double> latent_state) const {
    if (latent_state.size() != 2) throw UsageError("mg1_queue: latent state is (x_n, v_n)");
    double x = 0.0;
    for (double y : observed.values()) x += y;
    return {x, latent_state[1]};
}

bool MG1Model::admissible(const ParamVector& theta, const TimeSeriesData& observed) const {
    const auto& y = observed.values();
    if (y.empty()) return true;
    return *std::min_element(y.begin(), y.end()) >= theta[0];
}

}  // namespace abcpred
