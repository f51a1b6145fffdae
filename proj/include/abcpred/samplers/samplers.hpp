#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "abcpred/core/model.hpp"
#include "abcpred/core/prior.hpp"
#include "abcpred/core/rng.hpp"
#include "abcpred/core/types.hpp"
#include "abcpred/discrepancy/region.hpp"
#include "abcpred/summaries/summary.hpp"

namespace abcpred {

/// standard: theta only. P: joint (z, z~) simulation. L: (z, v) simulation,
/// prediction left to abc_l_predict.
enum class PredictionMode { standard, P, L };

std::string to_string(PredictionMode mode);

/// Everything a sampler needs about the inference problem. The model, prior
/// and summary must outlive the problem.
struct AbcProblem {
    AbcProblem(const Model& model, const Prior& prior, const SummarySpec& spec, AcceptanceRegion region,
               TimeSeriesData observed);

    const Model* model;
    const Prior* prior;
    const SummarySpec* spec;
    AcceptanceRegion region;
    TimeSeriesData observed;
    std::vector<double> s_obs;
};

/// Sampler state; also the result of one proposal evaluation.
struct ChainState {
    ParamVector theta;
    std::vector<double> u;  ///< theta in transformed prior coordinates
    std::vector<double> summary;
    std::vector<double> raw;
    double kernel = 0.0;
    std::optional<TimeSeriesData> prediction;
    std::vector<double> latent;
    bool prediction_truncated = false;
    bool simulated = false;

    bool kernel_weight_ok() const noexcept { return kernel > 0.0; }
};

struct SamplerReport {
    std::vector<WeightedDraw> draws;
    double acceptance_rate = 0.0;
    double ess = 0.0;  ///< IS only; 0 otherwise
    std::size_t n_simulations = 0;
    std::size_t n_conditional_simulations = 0;
    std::size_t n_truncated = 0;
    std::size_t iterations = 0;
    std::size_t burn_in = 0;
    std::uint64_t seed = 0;
    std::vector<double> thresholds;
    std::vector<double> min_discrepancy;
    PredictionMode mode = PredictionMode::standard;
    bool deferred = false;
    std::vector<std::string> warnings;
};

/// Simulation mode used by a sampler in the given prediction mode.
SimMode simulation_mode(PredictionMode mode, bool defer);
/// Throws UsageError unless the model can serve the mode.
void check_capabilities(const Model& model, PredictionMode mode, bool defer);

/// Simulate at theta and score against the observed summary. Proposals outside
/// the prior or inadmissible for the observed data get kernel 0 and no simulation.
ChainState evaluate_proposal(const AbcProblem& problem, const std::vector<double>& u, SimMode sim_mode, Rng& rng);

/// m prior proposals split over `workers` streams derived from `seed`.
/// Accepted draws get weight 1. Non-uniform kernels accept with probability K.
SamplerReport abc_rejection(const AbcProblem& problem, std::size_t m, PredictionMode mode, std::uint64_t seed,
                            std::size_t workers = 1, bool defer = false);

/// Self-normalized IS with a box proposal q covering the prior. All draws are
/// kept; weights K * pi / q are normalized to sum to 1.
SamplerReport abc_importance(const AbcProblem& problem, const Prior& proposal, std::size_t m, PredictionMode mode,
                             std::uint64_t seed, std::size_t workers = 1, bool defer = false);

struct McmcOptions {
    std::size_t iterations = 0;  ///< total, burn-in included
    std::size_t burn_in = 0;
    std::vector<double> step_scales;  ///< random-walk sd per transformed component
    PredictionMode mode = PredictionMode::standard;
    bool defer = false;
};

/// Default random-walk scales 0.5 * prior range / sqrt(p).
std::vector<double> default_step_scales(const Prior& prior);

/// ABC-MCMC from `init`. Output is run-length compressed post-burn-in states.
SamplerReport abc_mcmc(const AbcProblem& problem, const McmcOptions& options, const ChainState& init,
                       std::uint64_t seed);

/// Prior draws until the kernel is positive. Throws InitError after `budget` tries.
ChainState find_init(const AbcProblem& problem, std::size_t budget, SimMode sim_mode, Rng& rng);

struct TuningOptions {
    double target_acceptance = 0.1;
    std::size_t prior_draws = 10000;
    std::size_t pilot_iterations = 10000;
    std::size_t max_rounds = 8;
    /// region component whose threshold is tuned; the others stay fixed
    std::size_t component = 0;
};

struct TuningResult {
    AcceptanceRegion region;
    ChainState start;
    std::vector<double> threshold_history;
    std::vector<double> rate_history;
    std::size_t n_simulations = 0;
    bool converged = false;
};

/// Threshold search for ABC-MCMC: prior-pilot quantile first, then short
/// chain segments re-setting h to the target quantile of proposal discrepancies
/// until the segment acceptance rate is within 25% of the target and h moves
/// by less than 10%.
TuningResult tune_mcmc(const AbcProblem& problem, const McmcOptions& options, const TuningOptions& tuning,
                       std::uint64_t seed);

/// Threshold for rejection/IS: target quantile of discrepancies of n_pilot prior draws.
AcceptanceRegion tune_rejection(const AbcProblem& problem, double target_acceptance, std::size_t n_pilot,
                                std::size_t component, std::uint64_t seed);

/// One z~ ~ pi(z~ | y, theta) per draw. Needs conditional sampling.
std::vector<WeightedDraw> abc_f_predict(const std::vector<WeightedDraw>& theta_draws, const Model& model,
                                        const TimeSeriesData& observed, Rng& rng);

/// One z~ ~ pi(z~ | y, v, theta) per positive-weight draw.
std::vector<WeightedDraw> abc_l_predict(const std::vector<WeightedDraw>& draws, const Model& model,
                                        const TimeSeriesData& observed, Rng& rng,
                                        std::size_t* n_simulations = nullptr);

/// Deferred ABC-P: continue each retained pseudo-data trajectory from its stored state.
SamplerReport defer_predictions(SamplerReport report, const Model& model, Rng& rng);

/// Expanded per-iteration values of f over run-length compressed draws.
std::vector<double> expand_chain(const std::vector<WeightedDraw>& draws,
                                 const std::function<double(const WeightedDraw&)>& f);

}  // namespace abcpred
