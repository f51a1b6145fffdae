#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abcpred/core/rng.hpp"
#include "abcpred/core/types.hpp"

namespace abcpred {

/// What a forward simulation must produce.
enum class SimMode {
    observed,      ///< pseudo-data z only
    joint,         ///< (z, z~)
    latent_joint,  ///< (z, v): latent_state filled, no future
};

/// Simulator interface every model implements. A model owns its task
/// geometry: the observation inputs and the future (or missing) inputs.
///
/// The continuation state (`SimOutput::latent_state`) holds what is needed to
/// continue the pseudo-data's own trajectory into the future inputs. A model
/// also knows how to build a continuation state from observed data, either
/// alone (conditional sampling) or combined with simulated latents.
class Model {
public:
    virtual ~Model() = default;

    virtual std::string_view kind() const = 0;
    virtual std::vector<std::string> parameter_names() const = 0;
    std::size_t dimension() const { return parameter_names().size(); }
    virtual SimulatorCapabilities capabilities() const = 0;

    virtual std::vector<double> observation_times() const = 0;
    virtual std::vector<double> future_times() const = 0;
    virtual std::size_t observation_width() const = 0;
    virtual std::size_t future_width() const = 0;

    virtual SimOutput simulate(const ParamVector& theta, SimMode mode, Rng& rng) const = 0;

    /// Future path from a continuation state. Requires latent_conditional.
    virtual Forecast continue_from(std::span<const double> state, const ParamVector& theta, Rng& rng) const;

    /// Continuation state read off observed data alone. Requires conditional.
    virtual std::vector<double> observed_state(const TimeSeriesData& observed) const;

    /// Continuation state combining observed data with a simulated latent
    /// state. Requires latent_conditional.
    virtual std::vector<double> merge_latent(const TimeSeriesData& observed,
                                             std::span<const double> latent_state) const;

    /// Cheap pre-simulation constraint check against the observed data.
    virtual bool admissible(const ParamVector& theta, const TimeSeriesData& observed) const;
};

}  // namespace abcpred
