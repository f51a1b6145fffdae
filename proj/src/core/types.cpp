#include "abcpred/core/types.hpp"

#include <cmath>

#include "abcpred/core/errors.hpp"

namespace abcpred {

ParamVector::ParamVector(std::vector<double> values, std::shared_ptr<const std::vector<std::string>> names)
    : values_(std::move(values)), names_(std::move(names)) {
    if (names_ && names_->size() != values_.size()) {
        throw UsageError("ParamVector: " + std::to_string(values_.size()) + " values but " +
                         std::to_string(names_->size()) + " names");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw UsageError("ParamVector: non-finite component");
    }
}

ParamVector::ParamVector(std::vector<double> values, std::vector<std::string> names)
    : ParamVector(std::move(values), std::make_shared<const std::vector<std::string>>(std::move(names))) {}

const std::vector<std::string>& ParamVector::names() const {
    static const std::vector<std::string> empty;
    return names_ ? *names_ : empty;
}

ParamVector ParamVector::with_values(std::vector<double> values) const {
    return ParamVector(std::move(values), names_);
}

TimeSeriesData::TimeSeriesData(std::vector<double> times, std::size_t width, std::vector<double> values)
    : times_(std::move(times)), width_(width), values_(std::move(values)) {
    if (values_.size() != times_.size() * width_) {
        throw UsageError("TimeSeriesData: " + std::to_string(values_.size()) + " values for " +
                         std::to_string(times_.size()) + " records of width " + std::to_string(width_));
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) throw UsageError("TimeSeriesData: times must be strictly increasing");
    }
}

std::vector<double> TimeSeriesData::column(std::size_t j) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = value(i, j);
    return out;
}

std::vector<double> TimeSeriesData::latent_column(std::size_t j) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = latent(i, j);
    return out;
}

void TimeSeriesData::set_latents(std::size_t latent_width, std::vector<double> latent_values) {
    if (latent_values.size() != latent_width * size()) {
        throw UsageError("TimeSeriesData: latent track must have exactly one record per observation");
    }
    latent_width_ = latent_width;
    latent_values_ = std::move(latent_values);
}

TimeSeriesData TimeSeriesData::slice_time(double lo, double hi) const {
    std::vector<double> t;
    std::vector<double> v;
    std::vector<double> lv;
    for (std::size_t i = 0; i < size(); ++i) {
        if (times_[i] < lo || times_[i] > hi) continue;
        t.push_back(times_[i]);
        auto r = record(i);
        v.insert(v.end(), r.begin(), r.end());
        for (std::size_t j = 0; j < latent_width_; ++j) lv.push_back(latent(i, j));
    }
    TimeSeriesData out(std::move(t), width_, std::move(v));
    if (latent_width_ > 0) out.set_latents(latent_width_, std::move(lv));
    return out;
}

TimeSeriesData TimeSeriesData::project(std::span<const std::size_t> columns) const {
    std::vector<double> v;
    v.reserve(size() * columns.size());
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j : columns) {
            if (j >= width_) throw UsageError("TimeSeriesData::project: column out of range");
            v.push_back(value(i, j));
        }
    }
    return TimeSeriesData(times_, columns.size(), std::move(v));
}

void SimulatorCapabilities::validate() const {
    if (conditional && !latent_conditional) {
        throw UsageError("simulator capabilities: conditional sampling implies latent-conditional sampling");
    }
}

}  // namespace abcpred
