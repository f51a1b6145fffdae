#include "abcpred/core/model.hpp"

#include "abcpred/core/errors.hpp"

namespace abcpred {

Forecast Model::continue_from(std::span<const double>, const ParamVector&, Rng&) const {
    throw UsageError(std::string(kind()) + ": simulator cannot continue from a latent state");
}

std::vector<double> Model::observed_state(const TimeSeriesData&) const {
    throw UsageError(std::string(kind()) + ": conditional sampling from observed data alone is not available");
}

std::vector<double> Model::merge_latent(const TimeSeriesData&, std::span<const double>) const {
    throw UsageError(std::string(kind()) + ": simulator has no latent-conditional sampler");
}

bool Model::admissible(const ParamVector&, const TimeSeriesData&) const { return true; }

}  // namespace abcpred
