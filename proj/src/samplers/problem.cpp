#include <cmath>
#include <limits>

#include "abcpred/core/errors.hpp"
#include "abcpred/samplers/samplers.hpp"

namespace abcpred {

std::string to_string(PredictionMode mode) {
    switch (mode) {
        case PredictionMode::standard: return "standard";
        case PredictionMode::P: return "P";
        case PredictionMode::L: return "L";
    }
    return "?";
}

AbcProblem::AbcProblem(const Model& model_, const Prior& prior_, const SummarySpec& spec_, AcceptanceRegion region_,
                       TimeSeriesData observed_)
    : model(&model_), prior(&prior_), spec(&spec_), region(std::move(region_)), observed(std::move(observed_)) {
    if (prior->dimension() != model->dimension()) {
        throw UsageError("prior has " + std::to_string(prior->dimension()) + " components, model " +
                         std::string(model->kind()) + " has " + std::to_string(model->dimension()));
    }
    s_obs = spec->compute(observed);
    for (const auto& c : region.components()) {
        if (c.offset + c.length > s_obs.size()) throw UsageError("acceptance region does not fit the summary");
    }
}

SimMode simulation_mode(PredictionMode mode, bool defer) {
    switch (mode) {
        case PredictionMode::standard: return SimMode::observed;
        case PredictionMode::P: return defer ? SimMode::observed : SimMode::joint;
        case PredictionMode::L: return SimMode::latent_joint;
    }
    return SimMode::observed;
}

void check_capabilities(const Model& model, PredictionMode mode, bool defer) {
    const auto caps = model.capabilities();
    const std::string name(model.kind());
    if (mode == PredictionMode::P && !caps.joint) throw UsageError(name + ": ABC-P needs joint simulation");
    if (mode == PredictionMode::P && defer && !caps.latent_conditional) {
        throw UsageError(name + ": deferred ABC-P needs latent-conditional simulation");
    }
    if (mode == PredictionMode::L && !(caps.latent_joint && caps.latent_conditional)) {
        throw UsageError(name + ": ABC-L needs latent-joint and latent-conditional simulation");
    }
}

ChainState evaluate_proposal(const AbcProblem& problem, const std::vector<double>& u, SimMode sim_mode, Rng& rng) {
    ChainState st;
    st.u = u;
    st.raw.assign(problem.region.components().size(), std::numeric_limits<double>::infinity());
    if (!problem.prior->contains_transformed(u)) return st;
    st.theta = ParamVector(problem.prior->from_transformed(u), problem.prior->shared_names());
    if (!problem.model->admissible(st.theta, problem.observed)) return st;
    auto sim = problem.model->simulate(st.theta, sim_mode, rng);
    st.simulated = true;
    if (sim.truncated) return st;
    st.summary = problem.spec->compute(sim.observed);
    st.raw = problem.region.raw_discrepancy(problem.s_obs, st.summary);
    st.kernel = problem.region.weight_from_raw(st.raw);
    st.prediction = std::move(sim.future);
    st.prediction_truncated = sim.future_truncated;
    st.latent = std::move(sim.latent_state);
    return st;
}

std::vector<double> default_step_scales(const Prior& prior) {
    std::vector<double> s;
    const double root_p = std::sqrt(static_cast<double>(prior.dimension()));
    for (const auto& b : prior.bounds()) s.push_back(0.5 * (b.hi - b.lo) / root_p);
    return s;
}

std::vector<double> expand_chain(const std::vector<WeightedDraw>& draws,
                                 const std::function<double(const WeightedDraw&)>& f) {
    std::vector<double> out;
    for (const auto& d : draws) out.insert(out.end(), d.repeats, f(d));
    return out;
}

}  // namespace abcpred
