#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace abcpred {

/// A point in parameter space. Component labels are shared between copies.
class ParamVector {
public:
    ParamVector() = default;
    ParamVector(std::vector<double> values, std::shared_ptr<const std::vector<std::string>> names);
    ParamVector(std::vector<double> values, std::vector<std::string> names);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<std::string>& names() const;
    const std::shared_ptr<const std::vector<std::string>>& shared_names() const noexcept { return names_; }

    /// Same labels, new values.
    ParamVector with_values(std::vector<double> values) const;

    friend bool operator==(const ParamVector& a, const ParamVector& b) { return a.values_ == b.values_; }

private:
    std::vector<double> values_;
    std::shared_ptr<const std::vector<std::string>> names_;
};

/// Ordered records y_1..y_n of fixed width d at strictly increasing times,
/// with an optional latent track of n records.
class TimeSeriesData {
public:
    TimeSeriesData() = default;
    TimeSeriesData(std::vector<double> times, std::size_t width, std::vector<double> values);

    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }
    std::size_t width() const noexcept { return width_; }
    double time(std::size_t i) const { return times_[i]; }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double value(std::size_t i, std::size_t j) const { return values_[i * width_ + j]; }
    std::span<const double> record(std::size_t i) const {
        return std::span<const double>(values_).subspan(i * width_, width_);
    }
    std::vector<double> column(std::size_t j) const;

    bool has_latents() const noexcept { return latent_width_ > 0; }
    std::size_t latent_width() const noexcept { return latent_width_; }
    const std::vector<double>& latent_values() const noexcept { return latent_values_; }
    double latent(std::size_t i, std::size_t j) const { return latent_values_[i * latent_width_ + j]; }
    std::vector<double> latent_column(std::size_t j) const;
    void set_latents(std::size_t latent_width, std::vector<double> latent_values);

    /// Records whose time lies in [lo, hi].
    TimeSeriesData slice_time(double lo, double hi) const;
    /// The records restricted to column subset `columns` (latents dropped).
    TimeSeriesData project(std::span<const std::size_t> columns) const;

    friend bool operator==(const TimeSeriesData&, const TimeSeriesData&) = default;

private:
    std::vector<double> times_;
    std::size_t width_ = 0;
    std::vector<double> values_;
    std::size_t latent_width_ = 0;
    std::vector<double> latent_values_;
};

/// One forward simulation: pseudo-data z, optional future z~, and the state
/// needed to continue the pseudo-data's trajectory.
struct SimOutput {
    TimeSeriesData observed;
    std::optional<TimeSeriesData> future;
    std::vector<double> latent_state;
    /// The observed segment hit a simulation safety cap; summaries are meaningless.
    bool truncated = false;
    /// Only the future segment hit a cap; trailing future records repeat the last state.
    bool future_truncated = false;
};

/// A simulated future path.
struct Forecast {
    TimeSeriesData path;
    bool truncated = false;
};

/// Which predictive densities the simulator can sample from.
struct SimulatorCapabilities {
    bool joint = false;               ///< (z, z~) | theta
    bool conditional = false;         ///< z~ | y, theta
    bool latent_joint = false;        ///< (z, v) | theta
    bool latent_conditional = false;  ///< z~ | y, v, theta

    /// Throws UsageError unless conditional implies latent_conditional.
    void validate() const;
};

/// One sampler output. MCMC output is run-length compressed: `repeats`
/// consecutive chain iterations share this state.
struct WeightedDraw {
    ParamVector theta;
    std::optional<TimeSeriesData> prediction;
    std::vector<double> latent;
    double weight = 1.0;
    std::vector<double> raw_discrepancy;
    std::size_t repeats = 1;
    bool prediction_truncated = false;

    double mass() const noexcept { return weight * static_cast<double>(repeats); }
};

}  // namespace abcpred
