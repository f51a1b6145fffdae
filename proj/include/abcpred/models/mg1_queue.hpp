#pragma once

#include "abcpred/core/model.hpp"

namespace abcpred {

/// Single-server FIFO queue. Interarrival w_i ~ Exp(theta3), service
/// u_i ~ U[theta1, theta2]. Observed: interdeparture times y_1..y_n indexed by
/// customer number. Future: waiting times (arrival to departure) of customers
/// n+1..n+n_future. Continuation state is (x_n, v_n): last departure and last
/// arrival time.
class MG1Model final : public Model {
public:
    MG1Model(std::size_t n, std::size_t n_future);

    std::string_view kind() const override { return "mg1_queue"; }
    std::vector<std::string> parameter_names() const override { return {"theta1", "theta2", "theta3"}; }
    SimulatorCapabilities capabilities() const override { return {true, false, true, true}; }

    std::vector<double> observation_times() const override;
    std::vector<double> future_times() const override;
    std::size_t observation_width() const override { return 1; }
    std::size_t future_width() const override { return 1; }

    /// The observed track carries arrival times v_i as its latent column.
    SimOutput simulate(const ParamVector& theta, SimMode mode, Rng& rng) const override;
    Forecast continue_from(std::span<const double> state, const ParamVector& theta, Rng& rng) const override;
    /// (x_n from the observed interdepartures, v_n from the latent state).
    std::vector<double> merge_latent(const TimeSeriesData& observed,
                                     std::span<const double> latent_state) const override;
    /// Service times are at least theta1, so every interdeparture time is too.
    bool admissible(const ParamVector& theta, const TimeSeriesData& observed) const override;

    std::size_t n() const noexcept { return n_; }
    std::size_t n_future() const noexcept { return n_future_; }

private:
    std::size_t n_;
    std::size_t n_future_;
};

}  // namespace abcpred
