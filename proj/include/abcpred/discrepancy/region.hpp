#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abcpred/summaries/summary.hpp"

namespace abcpred {

class Norm {
public:
    enum class Kind { weighted_quadratic, weighted_euclidean, l_infinity };

    /// l_infinity; also the plain absolute value in one dimension.
    Norm() = default;
    static Norm l_infinity() { return {}; }
    /// r^T C^{-1} r (no square root).
    static Norm weighted_quadratic(const Eigen::MatrixXd& covariance);
    /// sqrt(sum r_i^2 / w_i) with w the squared MADs.
    static Norm weighted_euclidean(const Eigen::VectorXd& squared_mads);
    static Norm from_calibration(const WeightCalibration& cal);

    Kind kind() const noexcept { return kind_; }
    std::size_t dimension() const noexcept { return dim_; }
    double operator()(std::span<const double> r) const;

private:
    Kind kind_ = Kind::l_infinity;
    std::size_t dim_ = 0;  ///< 0 for l_infinity (any length)
    Eigen::MatrixXd precision_;
    Eigen::VectorXd inv_weights_;
};

struct Kernel {
    enum class Kind { uniform, gaussian };
    Kind kind = Kind::uniform;
    /// Bandwidth; may be +inf for the uniform kernel.
    double h = std::numeric_limits<double>::infinity();

    double operator()(double r) const;
};

/// One discrepancy component: a contiguous summary slice with its norm and kernel.
struct RegionComponent {
    std::size_t offset = 0;
    std::size_t length = 0;
    Norm norm;
    Kernel kernel;
};

class AcceptanceRegion {
public:
    enum class Mode { single, dual };

    AcceptanceRegion() = default;
    explicit AcceptanceRegion(std::vector<RegionComponent> components);

    /// Single component over the whole summary.
    static AcceptanceRegion single(std::size_t dim, Norm norm, Kernel kernel);
    /// Parametric slice [0, parametric_dim) and predictive slice after it.
    static AcceptanceRegion dual(const SummarySpec& spec, Norm parametric_norm, Kernel parametric_kernel,
                                 Norm predictive_norm, Kernel predictive_kernel);

    Mode mode() const noexcept { return components_.size() == 2 ? Mode::dual : Mode::single; }
    const std::vector<RegionComponent>& components() const noexcept { return components_; }
    std::vector<double> thresholds() const;
    void set_threshold(std::size_t component, double h);
    bool all_uniform() const;

    /// Per-component norm of the slice differences.
    std::vector<double> raw_discrepancy(std::span<const double> s_y, std::span<const double> s_z) const;
    /// Product of the component kernel values at the given raw discrepancies.
    double weight_from_raw(std::span<const double> raw) const;

private:
    std::vector<RegionComponent> components_;
};

struct KernelEvaluation {
    double weight = 0.0;
    std::vector<double> raw;
};

KernelEvaluation kernel_weight(const AcceptanceRegion& region, std::span<const double> s_y,
                               std::span<const double> s_z);

/// Empirical (type-7) target-quantile of the pilot discrepancies. Infinite
/// entries (failed proposals) sort last.
double tune_threshold(std::span<const double> pilot_discrepancies, double target_acceptance);

struct RegionReport {
    bool passed = true;
    std::optional<std::size_t> violating_index;
    std::string message;
};

/// Checks a threshold schedule for the region: each entry of `h_sequence` is
/// the sequence for one component. Every sequence must be strictly decreasing
/// and positive (UsageError otherwise); for dual regions the ratio between the
/// two sequences must stay fixed.
RegionReport check_region_assumptions(const AcceptanceRegion& region,
                                      const std::vector<std::vector<double>>& h_sequence);

}  // namespace abcpred
