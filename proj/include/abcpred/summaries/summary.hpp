#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abcpred/core/model.hpp"
#include "abcpred/core/rng.hpp"
#include "abcpred/core/types.hpp"

namespace abcpred {

/// Partitioned statistic s(y) = (s_bar(y), s_tilde(y)): parametric part first,
/// predictive part last.
class SummarySpec {
public:
    using Fn = std::function<std::vector<double>(const TimeSeriesData&)>;

    SummarySpec(std::string id, std::size_t parametric_dim, std::size_t predictive_dim, Fn compute,
                std::optional<TimeSeriesData> reference_data = std::nullopt);

    const std::string& id() const noexcept { return id_; }
    std::size_t parametric_dim() const noexcept { return parametric_dim_; }
    std::size_t predictive_dim() const noexcept { return predictive_dim_; }
    std::size_t dimension() const noexcept { return parametric_dim_ + predictive_dim_; }
    const std::optional<TimeSeriesData>& reference_data() const noexcept { return reference_; }

    /// Throws UsageError when the output has the wrong length or a non-finite entry.
    std::vector<double> compute(const TimeSeriesData& data) const;

private:
    std::string id_;
    std::size_t parametric_dim_;
    std::size_t predictive_dim_;
    Fn fn_;
    std::optional<TimeSeriesData> reference_;
};

std::vector<double> compute_summary(const SummarySpec& spec, const TimeSeriesData& data);

struct WeightCalibration {
    enum class Method { covariance, mad };
    Method method = Method::covariance;
    /// covariance: d x d SPD matrix; mad: d x 1 vector of squared MADs.
    Eigen::MatrixXd values;
    std::size_t n_pilot = 0;
    ParamVector theta_ref;
    /// summary components the calibration covers
    std::size_t offset = 0;
    std::size_t length = 0;
};

/// Empirical spread of summary components [offset, offset + length) over
/// n_pilot simulations at theta_ref. length = 0 means the whole summary.
/// Truncated simulations are skipped and replaced.
WeightCalibration calibrate_weights(const Model& model, const ParamVector& theta_ref, const SummarySpec& spec,
                                    WeightCalibration::Method method, std::size_t n_pilot, Rng& rng,
                                    std::size_t offset = 0, std::size_t length = 0);

/// Calibration from precomputed pilot vectors (rows).
WeightCalibration calibrate_from_vectors(const std::vector<std::vector<double>>& pilot,
                                         WeightCalibration::Method method);

/// Names of the built-in statistics.
std::vector<std::string> summary_ids();

/// Build a registered statistic for `model`. `observed` is required by
/// statistics defined relative to the observed data (mg1.s1).
SummarySpec make_summary(const std::string& id, const Model& model, const TimeSeriesData* observed = nullptr);

/// Markov weighted average ((1 - phi) sum_{i<n} y_i + y_n) / n.
double markov_weighted_average(std::span<const double> y, double phi);

}  // namespace abcpred
