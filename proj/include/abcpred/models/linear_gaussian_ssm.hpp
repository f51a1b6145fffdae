#pragma once

#include <vector>

#include "abcpred/core/model.hpp"

namespace abcpred {

/// Latent AR(1) v_t = c + phi v_{t-1} + N(0, sigma2), v_0 = 0, observed with
/// noise y_t = v_t + N(0, omega2).
class LinearGaussianSSM final : public Model {
public:
    LinearGaussianSSM(double phi, double sigma2, double omega2, std::size_t n,
                      std::vector<std::size_t> future_times = {});

    std::string_view kind() const override { return "linear_gaussian_ssm"; }
    std::vector<std::string> parameter_names() const override { return {"c"}; }
    SimulatorCapabilities capabilities() const override { return {true, false, true, true}; }

    std::vector<double> observation_times() const override;
    std::vector<double> future_times() const override;
    std::size_t observation_width() const override { return 1; }
    std::size_t future_width() const override { return 1; }

    /// The observed track carries v_1..v_n as its latent column.
    SimOutput simulate(const ParamVector& theta, SimMode mode, Rng& rng) const override;
    Forecast continue_from(std::span<const double> state, const ParamVector& theta, Rng& rng) const override;
    std::vector<double> merge_latent(const TimeSeriesData& observed,
                                     std::span<const double> latent_state) const override;

    double phi() const noexcept { return phi_; }
    double sigma2() const noexcept { return sigma2_; }
    double omega2() const noexcept { return omega2_; }
    std::size_t n() const noexcept { return n_; }

private:
    double phi_;
    double sigma2_;
    double omega2_;
    std::size_t n_;
    std::vector<std::size_t> future_;
};

}  // namespace abcpred
