#pragma once

#include <vector>

#include "abcpred/core/model.hpp"

namespace abcpred {

/// AR(1) with unknown level c: y_t = c + phi y_{t-1} + N(0, sigma2), y_0 given.
/// Observed at t = 1..n; the future is a set of integer times beyond n.
class GaussianMarkovModel final : public Model {
public:
    GaussianMarkovModel(double phi, double sigma2, std::size_t n, std::vector<std::size_t> future_times = {},
                        double y0 = 0.0);

    std::string_view kind() const override { return "gaussian_markov"; }
    std::vector<std::string> parameter_names() const override { return {"c"}; }
    SimulatorCapabilities capabilities() const override { return {true, true, true, true}; }

    std::vector<double> observation_times() const override;
    std::vector<double> future_times() const override;
    std::size_t observation_width() const override { return 1; }
    std::size_t future_width() const override { return 1; }

    SimOutput simulate(const ParamVector& theta, SimMode mode, Rng& rng) const override;
    Forecast continue_from(std::span<const double> state, const ParamVector& theta, Rng& rng) const override;
    std::vector<double> observed_state(const TimeSeriesData& observed) const override;
    /// The chain is Markov in y, so the latent state adds nothing beyond y_n.
    std::vector<double> merge_latent(const TimeSeriesData& observed,
                                     std::span<const double> latent_state) const override;

    double phi() const noexcept { return phi_; }
    double sigma2() const noexcept { return sigma2_; }
    std::size_t n() const noexcept { return n_; }
    double y0() const noexcept { return y0_; }

private:
    double phi_;
    double sigma2_;
    double sigma_;
    std::size_t n_;
    std::vector<std::size_t> future_;
    double y0_;
};

}  // namespace abcpred
