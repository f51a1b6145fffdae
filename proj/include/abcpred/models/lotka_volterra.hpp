#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "abcpred/core/model.hpp"

namespace abcpred {

/// Prey/predator counts.
using LvState = std::array<std::int64_t, 2>;

struct GillespieResult {
    std::vector<LvState> records;  ///< state at each requested time
    bool truncated = false;        ///< event cap or population guard hit; trailing records repeat the last state
    std::size_t truncated_from = 0;  ///< first frozen record when truncated
};

/// Exact stochastic simulation of the jump process with rates
/// theta1 z1 (prey birth), theta2 z1 z2 (predation), theta3 z2 (predator death),
/// starting from `start` at time t0 and recording at increasing `record_times` (>= t0).
/// Once one species is extinct the other evolves by its closed-form transition law.
GillespieResult gillespie(const LvState& start, double t0, std::span<const double> record_times,
                          std::span<const double> theta, Rng& rng, std::uint64_t event_cap = 10'000'000);

/// Task geometry for the three prediction problems.
struct LvTask {
    enum class Kind { prediction, missing };
    Kind kind = Kind::prediction;
    bool prey_only = false;  ///< observe only the prey column
    double t1 = 24.0;
    double t2 = 45.0;
    double t3 = 0.0;              ///< missing-data task only
    std::size_t n_obs = 81;       ///< points per observed block
    double future_step = 0.3;     ///< prediction grid spacing after t1
    LvState y0 = {100, 50};
    std::uint64_t event_cap = 10'000'000;
};

class LotkaVolterraModel final : public Model {
public:
    explicit LotkaVolterraModel(LvTask task);

    std::string_view kind() const override { return "lotka_volterra"; }
    std::vector<std::string> parameter_names() const override { return {"theta1", "theta2", "theta3"}; }
    SimulatorCapabilities capabilities() const override;

    std::vector<double> observation_times() const override { return obs_times_; }
    std::vector<double> future_times() const override { return future_times_; }
    std::size_t observation_width() const override { return task_.prey_only ? 1 : 2; }
    std::size_t future_width() const override { return 2; }

    /// Prey-only tasks carry the predator track as the latent column.
    /// latent_state is (prey, predator) at t1.
    SimOutput simulate(const ParamVector& theta, SimMode mode, Rng& rng) const override;
    Forecast continue_from(std::span<const double> state, const ParamVector& theta, Rng& rng) const override;
    std::vector<double> observed_state(const TimeSeriesData& observed) const override;
    std::vector<double> merge_latent(const TimeSeriesData& observed,
                                     std::span<const double> latent_state) const override;

    const LvTask& task() const noexcept { return task_; }

private:
    LvTask task_;
    std::vector<double> obs_times_;
    std::vector<double> future_times_;
};

/// Equidistant grid of `count` points from lo to hi inclusive.
std::vector<double> equidistant(double lo, double hi, std::size_t count);

}  // namespace abcpred
