#include <cmath>

#include "abcpred/core/errors.hpp"
#include "abcpred/core/stats.hpp"
#include "abcpred/summaries/summary.hpp"

namespace abcpred {

WeightCalibration calibrate_from_vectors(const std::vector<std::vector<double>>& pilot,
                                         WeightCalibration::Method method) {
    if (pilot.size() < 2) throw UsageError("calibration: need at least two pilot vectors");
    const std::size_t d = pilot.front().size();
    const auto n = static_cast<Eigen::Index>(pilot.size());
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < n; ++i) {
        if (pilot[static_cast<std::size_t>(i)].size() != d) throw UsageError("calibration: ragged pilot vectors");
        for (std::size_t j = 0; j < d; ++j) x(i, static_cast<Eigen::Index>(j)) = pilot[static_cast<std::size_t>(i)][j];
    }
    WeightCalibration cal;
    cal.method = method;
    cal.n_pilot = pilot.size();
    cal.length = d;
    if (method == WeightCalibration::Method::mad) {
        cal.values.resize(static_cast<Eigen::Index>(d), 1);
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<double> col(pilot.size());
            for (std::size_t i = 0; i < pilot.size(); ++i) col[i] = pilot[i][j];
            const double m = stats::mad(col);
            if (!(m > 0.0)) {
                throw CalibrationError("calibration: summary component " + std::to_string(j) + " has zero MAD", j);
            }
            cal.values(static_cast<Eigen::Index>(j), 0) = m * m;
        }
        return cal;
    }
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centred = x.rowwise() - mean;
    Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(n - 1);
    for (Eigen::Index j = 0; j < cov.rows(); ++j) {
        if (!(cov(j, j) > 0.0)) {
            throw CalibrationError("calibration: summary component " + std::to_string(j) + " has zero variance",
                                   static_cast<std::size_t>(j));
        }
    }
    cov = 0.5 * (cov + cov.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        cov.diagonal().array() += 1e-10 * cov.trace() / static_cast<double>(d);
    }
    cal.values = cov;
    return cal;
}

WeightCalibration calibrate_weights(const Model& model, const ParamVector& theta_ref, const SummarySpec& spec,
                                    WeightCalibration::Method method, std::size_t n_pilot, Rng& rng,
                                    std::size_t offset, std::size_t length) {
    if (length == 0) length = spec.dimension() - offset;
    if (offset + length > spec.dimension()) throw UsageError("calibration: slice exceeds the summary");
    if (method == WeightCalibration::Method::covariance && n_pilot < 10 * length) {
        throw UsageError("calibration: covariance method needs n_pilot >= 10 d (" + std::to_string(10 * length) + ")");
    }
    std::vector<std::vector<double>> pilot;
    pilot.reserve(n_pilot);
    std::size_t attempts = 0;
    while (pilot.size() < n_pilot) {
        if (++attempts > 10 * n_pilot + 100) {
            throw UsageError("calibration: too many truncated pilot simulations at theta_ref");
        }
        auto sim = model.simulate(theta_ref, SimMode::observed, rng);
        if (sim.truncated) continue;
        auto s = spec.compute(sim.observed);
        pilot.emplace_back(s.begin() + static_cast<std::ptrdiff_t>(offset),
                           s.begin() + static_cast<std::ptrdiff_t>(offset + length));
    }
    WeightCalibration cal;
    try {
        cal = calibrate_from_vectors(pilot, method);
    } catch (const CalibrationError& e) {
        const std::size_t comp = offset + e.component();
        throw CalibrationError("calibration: summary " + spec.id() + " component " + std::to_string(comp) +
                                   " has no spread at theta_ref",
                               comp);
    }
    cal.theta_ref = theta_ref;
    cal.offset = offset;
    cal.length = length;
    return cal;
}

}  // namespace abcpred
