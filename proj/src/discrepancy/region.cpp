#include "abcpred/discrepancy/region.hpp"

#include <algorithm>
#include <cmath>

#include "abcpred/core/errors.hpp"
#include "abcpred/core/stats.hpp"

namespace abcpred {

Norm Norm::weighted_quadratic(const Eigen::MatrixXd& covariance) {
    if (covariance.rows() != covariance.cols() || covariance.rows() == 0) {
        throw UsageError("weighted-quadratic norm needs a square covariance");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(covariance);
    if (llt.info() != Eigen::Success) throw UsageError("weighted-quadratic norm: covariance not positive definite");
    Norm n;
    n.kind_ = Kind::weighted_quadratic;
    n.dim_ = static_cast<std::size_t>(covariance.rows());
    n.precision_ = llt.solve(Eigen::MatrixXd::Identity(covariance.rows(), covariance.cols()));
    n.precision_ = 0.5 * (n.precision_ + n.precision_.transpose()).eval();
    return n;
}

Norm Norm::weighted_euclidean(const Eigen::VectorXd& squared_mads) {
    if (squared_mads.size() == 0 || (squared_mads.array() <= 0.0).any()) {
        throw UsageError("weighted-euclidean norm needs positive weights");
    }
    Norm n;
    n.kind_ = Kind::weighted_euclidean;
    n.dim_ = static_cast<std::size_t>(squared_mads.size());
    n.inv_weights_ = squared_mads.cwiseInverse();
    return n;
}

Norm Norm::from_calibration(const WeightCalibration& cal) {
    if (cal.method == WeightCalibration::Method::covariance) return weighted_quadratic(cal.values);
    return weighted_euclidean(cal.values.col(0));
}

double Norm::operator()(std::span<const double> r) const {
    if (dim_ != 0 && r.size() != dim_) {
        throw UsageError("norm: expected " + std::to_string(dim_) + " components, got " + std::to_string(r.size()));
    }
    switch (kind_) {
        case Kind::l_infinity: {
            double m = 0.0;
            for (double v : r) m = std::max(m, std::abs(v));
            return m;
        }
        case Kind::weighted_euclidean: {
            double s = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) s += r[i] * r[i] * inv_weights_[static_cast<Eigen::Index>(i)];
            return std::sqrt(s);
        }
        case Kind::weighted_quadratic: {
            const Eigen::Map<const Eigen::VectorXd> v(r.data(), static_cast<Eigen::Index>(r.size()));
            return v.dot(precision_ * v);
        }
    }
    return 0.0;
}

double Kernel::operator()(double r) const {
    if (kind == Kind::uniform) return r <= h ? 1.0 : 0.0;
    if (!std::isfinite(r)) return 0.0;
    if (std::isinf(h)) return 1.0;
    return std::exp(-r * r / (2.0 * h * h));
}

AcceptanceRegion::AcceptanceRegion(std::vector<RegionComponent> components) : components_(std::move(components)) {
    if (components_.empty() || components_.size() > 2) {
        throw UsageError("acceptance region needs one or two components");
    }
    for (const auto& c : components_) {
        if (c.length == 0) throw UsageError("acceptance region: empty summary slice");
        if (c.norm.dimension() != 0 && c.norm.dimension() != c.length) {
            throw UsageError("acceptance region: norm dimension does not match its slice");
        }
        if (!(c.kernel.h >= 0.0)) throw UsageError("acceptance region: threshold must be nonnegative");
        if (c.kernel.kind == Kernel::Kind::gaussian && !(c.kernel.h > 0.0)) {
            throw UsageError("acceptance region: gaussian kernel needs h > 0");
        }
    }
    if (components_.size() == 2 && components_[0].offset + components_[0].length > components_[1].offset) {
        throw UsageError("acceptance region: slices must be ordered and disjoint");
    }
}

AcceptanceRegion AcceptanceRegion::single(std::size_t dim, Norm norm, Kernel kernel) {
    return AcceptanceRegion({RegionComponent{0, dim, std::move(norm), kernel}});
}

AcceptanceRegion AcceptanceRegion::dual(const SummarySpec& spec, Norm parametric_norm, Kernel parametric_kernel,
                                        Norm predictive_norm, Kernel predictive_kernel) {
    if (spec.predictive_dim() == 0) throw UsageError("dual region needs a predictive summary part");
    return AcceptanceRegion({RegionComponent{0, spec.parametric_dim(), std::move(parametric_norm), parametric_kernel},
                             RegionComponent{spec.parametric_dim(), spec.predictive_dim(),
                                             std::move(predictive_norm), predictive_kernel}});
}

std::vector<double> AcceptanceRegion::thresholds() const {
    std::vector<double> h;
    for (const auto& c : components_) h.push_back(c.kernel.h);
    return h;
}

void AcceptanceRegion::set_threshold(std::size_t component, double h) {
    if (component >= components_.size() || !(h >= 0.0)) throw UsageError("acceptance region: bad threshold");
    components_[component].kernel.h = h;
}

bool AcceptanceRegion::all_uniform() const {
    return std::all_of(components_.begin(), components_.end(),
                       [](const RegionComponent& c) { return c.kernel.kind == Kernel::Kind::uniform; });
}

std::vector<double> AcceptanceRegion::raw_discrepancy(std::span<const double> s_y, std::span<const double> s_z) const {
    if (s_y.size() != s_z.size()) throw UsageError("kernel_weight: summary lengths differ");
    std::vector<double> raw;
    raw.reserve(components_.size());
    std::vector<double> diff;
    for (const auto& c : components_) {
        if (c.offset + c.length > s_y.size()) throw UsageError("kernel_weight: region slice exceeds summary");
        diff.resize(c.length);
        for (std::size_t i = 0; i < c.length; ++i) diff[i] = s_y[c.offset + i] - s_z[c.offset + i];
        raw.push_back(c.norm(diff));
    }
    return raw;
}

double AcceptanceRegion::weight_from_raw(std::span<const double> raw) const {
    double w = 1.0;
    for (std::size_t k = 0; k < components_.size(); ++k) w *= components_[k].kernel(raw[k]);
    return w;
}

KernelEvaluation kernel_weight(const AcceptanceRegion& region, std::span<const double> s_y, std::span<const double> s_z) {
    KernelEvaluation e;
    e.raw = region.raw_discrepancy(s_y, s_z);
    e.weight = region.weight_from_raw(e.raw);
    return e;
}

double tune_threshold(std::span<const double> pilot_discrepancies, double target_acceptance) {
    if (pilot_discrepancies.empty()) throw UsageError("tune_threshold: no pilot discrepancies");
    if (!(target_acceptance > 0.0 && target_acceptance < 1.0)) {
        throw UsageError("tune_threshold: target acceptance must lie in (0, 1)");
    }
    return stats::quantile(pilot_discrepancies, target_acceptance);
}

RegionReport check_region_assumptions(const AcceptanceRegion& region, const std::vector<std::vector<double>>& h_sequence) {
    if (h_sequence.size() != region.components().size()) {
        throw UsageError("check_region_assumptions: need one threshold sequence per region component");
    }
    const std::size_t len = h_sequence.front().size();
    for (std::size_t c = 0; c < h_sequence.size(); ++c) {
        const auto& h = h_sequence[c];
        if (h.size() != len || len == 0) throw UsageError("check_region_assumptions: sequences must share a nonzero length");
        for (std::size_t t = 0; t < h.size(); ++t) {
            if (!(h[t] > 0.0) || !std::isfinite(h[t])) {
                throw UsageError("check_region_assumptions: thresholds must be positive and finite");
            }
            if (t > 0 && !(h[t] < h[t - 1])) {
                throw UsageError("check_region_assumptions: sequence " + std::to_string(c) +
                                 " is not strictly decreasing at index " + std::to_string(t));
            }
        }
    }
    RegionReport report;
    if (region.mode() == AcceptanceRegion::Mode::single) {
        report.message = "single region: shrinking thresholds";
        return report;
    }
    const double ratio0 = h_sequence[0][0] / h_sequence[1][0];
    for (std::size_t t = 1; t < len; ++t) {
        const double ratio = h_sequence[0][t] / h_sequence[1][t];
        if (std::abs(ratio - ratio0) > 1e-9 * std::abs(ratio0)) {
            report.passed = false;
            report.violating_index = t;
            report.message = "threshold ratio drifts at index " + std::to_string(t);
            return report;
        }
    }
    report.message = "dual region: fixed threshold ratio";
    return report;
}

}  // namespace abcpred
