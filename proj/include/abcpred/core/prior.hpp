#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "abcpred/core/rng.hpp"
#include "abcpred/core/types.hpp"

namespace abcpred {

/// Monotone per-component reparameterization applied before the box bounds.
struct Transform {
    enum class Kind { identity, log, shift };
    Kind kind = Kind::identity;
    /// For `shift`: the transformed value is theta[k] - theta[reference].
    std::size_t reference = 0;

    static Transform identity() { return {}; }
    static Transform log() { return {Kind::log, 0}; }
    static Transform shift(std::size_t reference) { return {Kind::shift, reference}; }
};

struct Bounds {
    double lo;
    double hi;
};

/// Uniform prior on a box in transformed coordinates u = T(theta).
/// Densities are reported with respect to Lebesgue measure on u.
class Prior {
public:
    Prior(std::vector<Bounds> bounds, std::vector<Transform> transforms, std::vector<std::string> names);

    std::size_t dimension() const noexcept { return bounds_.size(); }
    const std::vector<Bounds>& bounds() const noexcept { return bounds_; }
    const std::vector<Transform>& transforms() const noexcept { return transforms_; }
    const std::vector<std::string>& names() const noexcept { return *names_; }
    const std::shared_ptr<const std::vector<std::string>>& shared_names() const noexcept { return names_; }

    std::vector<double> to_transformed(std::span<const double> theta) const;
    std::vector<double> from_transformed(std::span<const double> u) const;

    bool contains_transformed(std::span<const double> u) const;
    bool contains(const ParamVector& theta) const;

    /// 1/volume inside the support, 0 outside. Throws UsageError on dimension mismatch.
    double density(const ParamVector& theta) const;
    double transformed_density(std::span<const double> u) const;

    ParamVector sample(Rng& rng) const;
    ParamVector make_param(std::vector<double> values) const;

    /// Volume of the box in transformed space.
    double volume() const noexcept { return volume_; }

private:
    std::vector<Bounds> bounds_;
    std::vector<Transform> transforms_;
    std::shared_ptr<const std::vector<std::string>> names_;
    double volume_ = 1.0;
};

/// Effective sample size (sum w)^2 / sum w^2. Throws DegenerateSampleError on all-zero weights.
double ess(std::span<const double> weights);

}  // namespace abcpred
