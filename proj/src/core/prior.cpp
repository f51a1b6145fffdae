#include "abcpred/core/prior.hpp"

#include <cmath>

#include "abcpred/core/errors.hpp"

namespace abcpred {

Prior::Prior(std::vector<Bounds> bounds, std::vector<Transform> transforms, std::vector<std::string> names)
    : bounds_(std::move(bounds)),
      transforms_(std::move(transforms)),
      names_(std::make_shared<const std::vector<std::string>>(std::move(names))) {
    if (transforms_.empty()) transforms_.assign(bounds_.size(), Transform::identity());
    if (transforms_.size() != bounds_.size() || names_->size() != bounds_.size()) {
        throw UsageError("Prior: bounds, transforms and names must have equal length");
    }
    for (std::size_t k = 0; k < bounds_.size(); ++k) {
        const auto& b = bounds_[k];
        if (!(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo < b.hi)) {
            throw UsageError("Prior: component " + std::to_string(k) + " needs finite lo < hi");
        }
        const auto& t = transforms_[k];
        if (t.kind == Transform::Kind::shift) {
            if (t.reference >= bounds_.size() || t.reference == k ||
                transforms_[t.reference].kind == Transform::Kind::shift) {
                throw UsageError("Prior: shift transform must reference another non-shift component");
            }
        }
        volume_ *= b.hi - b.lo;
    }
}

std::vector<double> Prior::to_transformed(std::span<const double> theta) const {
    if (theta.size() != dimension()) throw UsageError("Prior: dimension mismatch");
    std::vector<double> u(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        switch (transforms_[k].kind) {
            case Transform::Kind::identity: u[k] = theta[k]; break;
            case Transform::Kind::log:
                u[k] = theta[k] > 0.0 ? std::log(theta[k]) : -std::numeric_limits<double>::infinity();
                break;
            case Transform::Kind::shift: u[k] = theta[k] - theta[transforms_[k].reference]; break;
        }
    }
    return u;
}

std::vector<double> Prior::from_transformed(std::span<const double> u) const {
    if (u.size() != dimension()) throw UsageError("Prior: dimension mismatch");
    std::vector<double> theta(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        switch (transforms_[k].kind) {
            case Transform::Kind::identity: theta[k] = u[k]; break;
            case Transform::Kind::log: theta[k] = std::exp(u[k]); break;
            case Transform::Kind::shift: break;
        }
    }
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (transforms_[k].kind == Transform::Kind::shift) theta[k] = u[k] + theta[transforms_[k].reference];
    }
    return theta;
}

bool Prior::contains_transformed(std::span<const double> u) const {
    if (u.size() != dimension()) throw UsageError("Prior: dimension mismatch");
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!(u[k] >= bounds_[k].lo && u[k] <= bounds_[k].hi)) return false;
    }
    return true;
}

bool Prior::contains(const ParamVector& theta) const {
    return contains_transformed(to_transformed(theta.values()));
}

double Prior::density(const ParamVector& theta) const {
    if (theta.size() != dimension()) {
        throw UsageError("prior_density: theta has " + std::to_string(theta.size()) + " components, prior has " +
                         std::to_string(dimension()));
    }
    return transformed_density(to_transformed(theta.values()));
}

double Prior::transformed_density(std::span<const double> u) const {
    return contains_transformed(u) ? 1.0 / volume_ : 0.0;
}

ParamVector Prior::sample(Rng& rng) const {
    std::vector<double> u(dimension());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = rng.uniform(bounds_[k].lo, bounds_[k].hi);
    return ParamVector(from_transformed(u), names_);
}

ParamVector Prior::make_param(std::vector<double> values) const {
    if (values.size() != dimension()) throw UsageError("Prior: dimension mismatch");
    return ParamVector(std::move(values), names_);
}

double ess(std::span<const double> weights) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw UsageError("ess: weights must be finite and nonnegative");
        sum += w;
        sum_sq += w * w;
    }
    if (sum_sq <= 0.0) {
        throw DegenerateSampleError("ess: all weights are zero", std::numeric_limits<double>::quiet_NaN());
    }
    return sum * sum / sum_sq;
}

}  // namespace abcpred
